#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gdm/tensor.hpp"

namespace gdm {

// Reverse-mode tape. Every primitive computes its value eagerly, registers
// a backward closure, and returns a tensor bound to this tape. backward()
// replays the closures in exact reverse recording order, accumulating
// gradients additively into shared inputs. One backward pass per tape;
// build a fresh tape per optimization step.
//
// A tape and the tensors it creates are confined to one thread.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor matmul(const Tensor& a, const Tensor& b);
  // Same-shape addition, or row-broadcast when b is 1 x c (bias).
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor multiply(const Tensor& a, const Tensor& b);  // elementwise
  Tensor scale(const Tensor& a, Scalar s);
  Tensor relu(const Tensor& a);
  Tensor sigmoid(const Tensor& a);
  Tensor transpose(const Tensor& a);
  // Reductions over the node (row) dimension: n x c -> 1 x c.
  Tensor row_mean(const Tensor& a);
  Tensor row_sum(const Tensor& a);
  Tensor row_max(const Tensor& a);
  Tensor concat_rows(const std::vector<Tensor>& parts);
  Tensor log_softmax(const Tensor& a);  // rowwise, max-subtracted
  Tensor sum_all(const Tensor& a);      // n x c -> 1 x 1

  // Extension point for composite operations with hand-written backward
  // rules (the reconstruction loss uses it): wrap a computed value as an
  // output of this tape, then register the closure that propagates
  // out.grad() into the inputs.
  Tensor make_output(Matrix value, const char* op_name);
  void record_backward(std::function<void()> fn);

  // Seeds d(loss)/d(loss) = 1 and runs all closures in reverse. loss must
  // be a 1x1 output of this tape; calling twice is a usage error.
  void backward(const Tensor& loss);

  std::size_t recorded_ops() const { return records_.size(); }

 private:
  std::vector<std::function<void()>> records_;
  bool backward_done_ = false;

  static bool flows(const Tensor& t) { return t.grad_flows(); }
};

}  // namespace gdm
