#pragma once

#include <stdexcept>
#include <string>

namespace ceo {

// bad input: exit code 2 at the CLI
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleDistortion : ArgumentError {
  using ArgumentError::ArgumentError;
};

// numerical trouble: exit code 3
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};

struct DegeneracyError : NumericalError {
  using NumericalError::NumericalError;
};

struct InternalError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace ceo
