#include "gdm/adam.hpp"

#include <cmath>

namespace gdm {

AdamState::AdamState(std::vector<Tensor> params, Scalar learning_rate, Scalar beta1,
                     Scalar beta2, Scalar eps)
    : params_(std::move(params)), lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const Tensor& p : params_) {
    if (!p.defined() || !p.requires_grad())
      throw std::invalid_argument("adam: every parameter must require gradients");
    first_moment_.push_back(Matrix::Zero(p.rows(), p.cols()));
    second_moment_.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
}

void AdamState::step() {
  for (const Tensor& p : params_)
    if (!p.has_grad())
      throw std::logic_error("adam: parameter gradient not populated; run backward first");
  ++step_;
  const Scalar bc1 = 1.0 - std::pow(beta1_, static_cast<Scalar>(step_));
  const Scalar bc2 = 1.0 - std::pow(beta2_, static_cast<Scalar>(step_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Tensor& p = params_[i];
    const Matrix& g = p.grad();
    first_moment_[i] = beta1_ * first_moment_[i] + (1.0 - beta1_) * g;
    second_moment_[i] =
        (beta2_ * second_moment_[i].array() + (1.0 - beta2_) * g.array().square()).matrix();
    const auto m_hat = first_moment_[i].array() / bc1;
    const auto v_hat = second_moment_[i].array() / bc2;
    p.value().array() -= lr_ * m_hat / (v_hat.sqrt() + eps_);
    if (!p.value().allFinite()) throw NumericError("adam: parameter became non-finite");
    p.zero_grad();
  }
}

}  // namespace gdm
