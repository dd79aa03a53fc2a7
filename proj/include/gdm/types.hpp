#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gdm {

// 64-bit floating point everywhere; gradient-check tolerances dominate
// performance at the scales this library targets.
using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Raised for bad invocations and malformed configs (exit code 1 in the CLI).
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Raised for unreadable or malformed input data (exit code 2 in the CLI).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation produces NaN/Inf (exit code 3 in the CLI).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gdm
