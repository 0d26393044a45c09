#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace zogd {

/// Thrown when an argument violates a documented precondition.
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown by configuration parsing (unknown keys, missing fields, bad types).
struct ConfigError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};

/// Thrown by the convex bound evaluator when T fails its horizon condition.
struct HorizonTooShortError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};

/// Thrown when a function oracle produces a non-finite value.
/// Carries the query point for diagnosis.
class OracleOverflowError : public std::runtime_error {
 public:
  OracleOverflowError(const std::string& what, Eigen::VectorXd point)
      : std::runtime_error(what), point_(std::move(point)) {}

  const Eigen::VectorXd& point() const { return point_; }

 private:
  Eigen::VectorXd point_;
};

/// Filesystem failures, with the offending path in the message.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace zogd
