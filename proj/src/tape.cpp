#include "gdm/tape.hpp"

#include <cmath>

namespace gdm {

Tensor Tape::make_output(Matrix value, const char* op_name) {
  if (!value.allFinite())
    throw NumericError(std::string("non-finite result in op '") + op_name + "'");
  Tensor out;
  out.node_ = std::make_shared<Tensor::Node>();
  out.node_->value = std::move(value);
  out.node_->grad = Matrix::Zero(out.node_->value.rows(), out.node_->value.cols());
  out.node_->tape = this;
  return out;
}

void Tape::record_backward(std::function<void()> fn) {
  records_.push_back(std::move(fn));
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimensions do not match");
  Tensor out = make_output(a.value() * b.value(), "matmul");
  if (flows(a) || flows(b))
    record_backward([a, b, out]() {
      const Matrix& g = out.grad();
      if (a.grad_flows()) a.accumulate_grad(g * b.value().transpose());
      if (b.grad_flows()) b.accumulate_grad(a.value().transpose() * g);
    });
  return out;
}

Tensor Tape::add(const Tensor& a, const Tensor& b) {
  const bool broadcast = b.rows() == 1 && a.rows() != 1 && a.cols() == b.cols();
  if (!broadcast && (a.rows() != b.rows() || a.cols() != b.cols()))
    throw std::invalid_argument("add: shape mismatch");
  Matrix v = broadcast ? Matrix(a.value().rowwise() + b.value().row(0))
                       : Matrix(a.value() + b.value());
  Tensor out = make_output(std::move(v), "add");
  if (flows(a) || flows(b))
    record_backward([a, b, out, broadcast]() {
      const Matrix& g = out.grad();
      if (a.grad_flows()) a.accumulate_grad(g);
      if (b.grad_flows()) b.accumulate_grad(broadcast ? Matrix(g.colwise().sum()) : g);
    });
  return out;
}

Tensor Tape::multiply(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("multiply: shape mismatch");
  Tensor out = make_output(a.value().cwiseProduct(b.value()), "multiply");
  if (flows(a) || flows(b))
    record_backward([a, b, out]() {
      const Matrix& g = out.grad();
      if (a.grad_flows()) a.accumulate_grad(g.cwiseProduct(b.value()));
      if (b.grad_flows()) b.accumulate_grad(g.cwiseProduct(a.value()));
    });
  return out;
}

Tensor Tape::scale(const Tensor& a, Scalar s) {
  Tensor out = make_output(a.value() * s, "scale");
  if (flows(a))
    record_backward([a, out, s]() { a.accumulate_grad(out.grad() * s); });
  return out;
}

Tensor Tape::relu(const Tensor& a) {
  Tensor out = make_output(a.value().cwiseMax(0.0), "relu");
  if (flows(a))
    record_backward([a, out]() {
      // subgradient 0 at exactly 0
      const Matrix mask = (a.value().array() > 0.0).cast<Scalar>();
      a.accumulate_grad(out.grad().cwiseProduct(mask));
    });
  return out;
}

Tensor Tape::sigmoid(const Tensor& a) {
  Matrix v = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  Tensor out = make_output(std::move(v), "sigmoid");
  if (flows(a))
    record_backward([a, out]() {
      const auto& s = out.value().array();
      a.accumulate_grad((out.grad().array() * s * (1.0 - s)).matrix());
    });
  return out;
}

Tensor Tape::transpose(const Tensor& a) {
  Tensor out = make_output(a.value().transpose(), "transpose");
  if (flows(a))
    record_backward([a, out]() { a.accumulate_grad(out.grad().transpose()); });
  return out;
}

Tensor Tape::row_mean(const Tensor& a) {
  const Scalar inv_n = 1.0 / static_cast<Scalar>(a.rows());
  Tensor out = make_output(a.value().colwise().sum() * inv_n, "row_mean");
  if (flows(a))
    record_backward([a, out, inv_n]() {
      a.accumulate_grad(Matrix::Ones(a.rows(), 1) * (out.grad() * inv_n));
    });
  return out;
}

Tensor Tape::row_sum(const Tensor& a) {
  Tensor out = make_output(a.value().colwise().sum(), "row_sum");
  if (flows(a))
    record_backward([a, out]() {
      a.accumulate_grad(Matrix::Ones(a.rows(), 1) * out.grad());
    });
  return out;
}

Tensor Tape::row_max(const Tensor& a) {
  Tensor out = make_output(a.value().colwise().maxCoeff(), "row_max");
  if (flows(a))
    record_backward([a, out]() {
      // gradient routed to the first maximal row per column
      Matrix g = Matrix::Zero(a.rows(), a.cols());
      for (Index j = 0; j < a.cols(); ++j) {
        Index arg = 0;
        a.value().col(j).maxCoeff(&arg);
        g(arg, j) = out.grad()(0, j);
      }
      a.accumulate_grad(g);
    });
  return out;
}

Tensor Tape::concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: empty input");
  const Index c = parts.front().cols();
  Index r = 0;
  for (const Tensor& p : parts) {
    if (p.cols() != c) throw std::invalid_argument("concat_rows: column mismatch");
    r += p.rows();
  }
  Matrix v(r, c);
  Index at = 0;
  for (const Tensor& p : parts) {
    v.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  Tensor out = make_output(std::move(v), "concat_rows");
  bool any = false;
  for (const Tensor& p : parts) any = any || flows(p);
  if (any)
    record_backward([parts, out]() {
      Index at = 0;
      for (const Tensor& p : parts) {
        if (p.grad_flows()) p.accumulate_grad(out.grad().middleRows(at, p.rows()));
        at += p.rows();
      }
    });
  return out;
}

Tensor Tape::log_softmax(const Tensor& a) {
  Matrix v(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    const Scalar m = a.value().row(i).maxCoeff();
    const auto shifted = a.value().row(i).array() - m;
    v.row(i) = (shifted - std::log(shifted.exp().sum())).matrix();
  }
  Tensor out = make_output(std::move(v), "log_softmax");
  if (flows(a))
    record_backward([a, out]() {
      Matrix g(a.rows(), a.cols());
      for (Index i = 0; i < a.rows(); ++i) {
        const Scalar gsum = out.grad().row(i).sum();
        g.row(i) = out.grad().row(i) -
                   (out.value().row(i).array().exp() * gsum).matrix();
      }
      a.accumulate_grad(g);
    });
  return out;
}

Tensor Tape::sum_all(const Tensor& a) {
  Matrix v(1, 1);
  v(0, 0) = a.value().sum();
  Tensor out = make_output(std::move(v), "sum_all");
  if (flows(a))
    record_backward([a, out]() {
      a.accumulate_grad(Matrix::Constant(a.rows(), a.cols(), out.grad()(0, 0)));
    });
  return out;
}

void Tape::backward(const Tensor& loss) {
  if (backward_done_)
    throw std::logic_error("backward already ran on this tape");
  if (!loss.defined() || loss.origin() != this)
    throw std::logic_error("backward: loss was not produced through this tape");
  if (loss.rows() != 1 || loss.cols() != 1)
    throw std::logic_error("backward: loss must be 1x1");
  backward_done_ = true;
  loss.accumulate_grad(Matrix::Ones(1, 1));
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) (*it)();
}

}  // namespace gdm
