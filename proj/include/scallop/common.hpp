#pragma once

#include <stdexcept>
#include <string>

namespace scallop {

/// Angle outside the admissible opening interval.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Initial regime hint contradicts (or is required by) the switching rule.
struct CoherenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A synthesis target or control construction cannot be realized.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed scenario / control specification input.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scallop
