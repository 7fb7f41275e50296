#pragma once

#include <stdexcept>
#include <string>

namespace gbw {

// Raised when an exact enumeration would exceed a configured cap. The
// library never falls back to a sampled or heuristic value in that case.
struct EnumerationOverflowError : std::runtime_error {
  explicit EnumerationOverflowError(const std::string& what)
      : std::runtime_error("enumeration overflow: " + what) {}
};

// Raised when a space description violates one of its structural
// requirements (positivity, boundedness, weight-rule constraints).
struct InvalidSpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an operation is asked of a space or kind that does not
// support it (e.g. admissible-set enumeration on a non-Schreier norm).
struct UnsupportedOperationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gbw
