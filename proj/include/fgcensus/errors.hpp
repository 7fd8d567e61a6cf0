#pragma once

#include <stdexcept>

namespace fgc {

/// Thrown when a request exceeds a cost guard (enumeration size, lattice
/// scan budget, table memory). Costs grow exponentially in the length or
/// polynomially in the radius, so guards fail fast instead of running away.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fgc
