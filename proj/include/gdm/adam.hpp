#pragma once

#include <vector>

#include "gdm/tensor.hpp"

namespace gdm {

// Standard Adam with bias correction, applied in place over a fixed
// parameter set. Gradients must be populated (by Tape::backward) before
// each step; the step zeroes them afterwards.
class AdamState {
 public:
  AdamState(std::vector<Tensor> params, Scalar learning_rate, Scalar beta1 = 0.9,
            Scalar beta2 = 0.999, Scalar eps = 1e-8);

  void step();

  long step_count() const { return step_; }
  Scalar learning_rate() const { return lr_; }

 private:
  std::vector<Tensor> params_;
  std::vector<Matrix> first_moment_;
  std::vector<Matrix> second_moment_;
  long step_ = 0;
  Scalar lr_, beta1_, beta2_, eps_;
};

inline void adam_step(AdamState& state) { state.step(); }

}  // namespace gdm
