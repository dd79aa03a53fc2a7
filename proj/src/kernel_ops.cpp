#include "gdm/kernel_ops.hpp"

#include <cmath>

namespace gdm {

Tensor soft_cross_entropy(Tape& tape, const Tensor& log_probs, const Matrix& targets,
                          Reduction reduction) {
  if (log_probs.rows() != targets.rows() || log_probs.cols() != targets.cols())
    throw std::invalid_argument("soft_cross_entropy: shape mismatch");
  for (Index b = 0; b < targets.rows(); ++b)
    if (std::abs(targets.row(b).sum() - 1.0) > 1e-6)
      throw std::invalid_argument("soft_cross_entropy: target row " + std::to_string(b) +
                                  " does not sum to 1");
  const Scalar factor = reduction == Reduction::Mean
                            ? -1.0 / static_cast<Scalar>(targets.rows())
                            : -1.0;
  Tensor weighted = tape.multiply(log_probs, Tensor::constant(targets));
  return tape.scale(tape.sum_all(weighted), factor);
}

}  // namespace gdm
