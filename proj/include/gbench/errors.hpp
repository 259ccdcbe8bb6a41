#pragma once

#include <stdexcept>

namespace gbench {

// Precondition failures use std::invalid_argument. The two types below cover
// the remaining failure classes that callers (the CLI in particular) map to
// distinct exit codes.

/// A numerical procedure (bisection, quadrature, eigen-pairing) failed to
/// converge or could not be bracketed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A property that must hold by construction was observed to fail at runtime.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace gbench
