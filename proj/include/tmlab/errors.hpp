#pragma once

#include <stdexcept>
#include <string>

namespace tmlab {

/// Bad arguments or malformed input (CLI exit code 2).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical procedure on valid input (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A weight or potential evaluated to a non-finite value.
class SingularEvaluation : public NumericalError {
 public:
  SingularEvaluation(const std::string& what, double abscissa)
      : NumericalError(what + " (r = " + std::to_string(abscissa) + ")"), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// Shooting produced a solution that reaches zero inside the disk.
class NodalSolution : public NumericalError {
 public:
  NodalSolution(const std::string& what, double radius)
      : NumericalError(what), radius_(radius) {}
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

/// The adaptive integrator could not meet its tolerance.
class StepFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A trial-family parameter that does not fit the available range.
class ParameterError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace tmlab
