#pragma once

#include "gdm/tape.hpp"
#include "gdm/types.hpp"

namespace gdm {

// Symmetric GCN propagation operator: D~^{-1/2} (A + I) D~^{-1/2}, where D~
// is the degree of A + I. Rows of isolated nodes come out self-loop-only
// (1 at the diagonal). Entries of `a` must be non-negative; weighted
// adjacencies use their weights.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
normalize_adjacency(const Eigen::MatrixBase<Derived>& a) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using S = typename Derived::Scalar;
  Mat tilde = a;
  tilde.diagonal().array() += S(1);
  const auto inv_sqrt_deg = tilde.rowwise().sum().array().rsqrt().matrix().eval();
  return inv_sqrt_deg.asDiagonal() * tilde * inv_sqrt_deg.asDiagonal();
}

enum class Reduction { Mean, Sum };

// Cross-entropy against soft targets: reduction over the batch of
// -sum_c targets(b,c) * log_probs(b,c). `log_probs` rows are expected to be
// log-softmax outputs; each `targets` row must sum to 1 within 1e-6.
// Differentiable w.r.t. the log_probs input.
Tensor soft_cross_entropy(Tape& tape, const Tensor& log_probs, const Matrix& targets,
                          Reduction reduction = Reduction::Mean);

}  // namespace gdm
