#pragma once

#include <stdexcept>
#include <string>

namespace driftguard {

/// A caller broke an operation's precondition (bad size, out-of-range argument).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value where a finite one was required.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An accepted partial sum left 2K. The containment guarantee is
/// deterministic, so this is never a recoverable condition.
struct ContainmentViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace driftguard
