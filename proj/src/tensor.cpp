#include "gdm/tensor.hpp"

namespace gdm {

Tensor::Tensor(Matrix value, bool requires_grad) : node_(std::make_shared<Node>()) {
  if (!value.allFinite())
    throw NumericError("tensor constructed with non-finite values");
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
  if (requires_grad) node_->grad = Matrix::Zero(node_->value.rows(), node_->value.cols());
}

const Matrix& Tensor::grad() const {
  if (node_->grad.size() == 0)
    throw std::logic_error("tensor has no gradient storage");
  return node_->grad;
}

void Tensor::accumulate_grad(const Matrix& g) const {
  if (g.rows() != node_->value.rows() || g.cols() != node_->value.cols())
    throw std::logic_error("gradient shape mismatch");
  if (node_->grad.size() == 0) node_->grad = Matrix::Zero(g.rows(), g.cols());
  node_->grad += g;
  node_->grad_populated = true;
}

void Tensor::zero_grad() const {
  if (node_->grad.size() != 0) node_->grad.setZero();
  node_->grad_populated = false;
}

}  // namespace gdm
