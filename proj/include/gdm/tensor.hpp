#pragma once

#include <memory>
#include <utility>

#include "gdm/types.hpp"

namespace gdm {

class Tape;

// Dense 2-D value with an optional gradient slot. Copies share the
// underlying node (shallow, reference semantics), which is what lets a
// recorded backward rule accumulate into the same storage the optimizer
// reads. Gradient storage exists for parameters (requires_grad) and for
// tape outputs; plain constants carry none.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Matrix value, bool requires_grad = false);

  static Tensor parameter(Matrix value) { return Tensor(std::move(value), true); }
  static Tensor constant(Matrix value) { return Tensor(std::move(value), false); }

  bool defined() const { return node_ != nullptr; }
  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }

  const Matrix& value() const { return node_->value; }
  Matrix& value() { return node_->value; }

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return node_->grad_populated; }
  const Matrix& grad() const;

  // Gradient mutation is const on the handle: copies share one node.
  void accumulate_grad(const Matrix& g) const;
  void zero_grad() const;

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    bool grad_populated = false;
    const Tape* tape = nullptr;  // non-null for tape outputs
  };

  std::shared_ptr<Node> node_;
  friend class Tape;

  bool grad_flows() const { return node_->requires_grad || node_->tape != nullptr; }
  const Tape* origin() const { return node_->tape; }
};

}  // namespace gdm
