#pragma once

#include <stdexcept>
#include <string>

namespace maxent {

/// Bad input: a precondition on a parameter, shape or index was violated.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The explicit scheme's step restriction k*d/h^2 <= 1 does not hold.
class CflError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A solver failed: no convergence, zero pivot, loss of positivity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxent
