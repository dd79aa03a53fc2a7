#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gdm/tape.hpp"

namespace gdm {

struct GradCheckResult {
  std::string name;
  double max_rel_error = 0.0;
  bool pass = false;
};

// Builds a 1x1 loss from the given inputs on the supplied tape.
using LossBuilder = std::function<Tensor(Tape&, const std::vector<Tensor>&)>;

// Compares tape gradients of `build` against central finite differences
// (step h) at the given inputs. Relative error per entry is
// |analytic - numeric| / max(1, |analytic|, |numeric|); returns the max.
double max_gradient_error(const LossBuilder& build, const std::vector<Matrix>& inputs,
                          double h = 1e-5);

// Runs the whole finite-difference suite: every differentiable primitive
// plus the soft cross-entropy and structure-reconstruction composites, each
// on `instances` random small inputs. A check passes when its worst
// relative error stays within tol.
std::vector<GradCheckResult> run_gradient_checks(std::uint64_t seed = 20240901,
                                                 int instances = 10, double tol = 1e-4);

}  // namespace gdm
