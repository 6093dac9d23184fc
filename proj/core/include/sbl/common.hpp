#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sbl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Base of every error thrown by the library. The CLI maps the two families
// below to distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input problems: bad arguments, malformed files, violated data invariants.
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public InputError {
 public:
  using InputError::InputError;
};

// Malformed document. `field` holds a JSON-pointer-like path to the culprit.
class FormatError : public InputError {
 public:
  FormatError(std::string field, const std::string& what)
      : InputError(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class InvariantViolation : public InputError {
 public:
  using InputError::InputError;
};

// Numerical problems raised while solving.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public NumericalError {
 public:
  NumericalFailure(const std::string& what, double condition = 0.0)
      : NumericalError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Data that makes a precision estimate unbounded (zero residual).
class DegenerateData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sbl
