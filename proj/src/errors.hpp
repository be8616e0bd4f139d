#pragma once

#include <stdexcept>
#include <string>

namespace fockrg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input: malformed config, invalid argument, violated precondition.
struct ConfigError : Error {
  using Error::Error;
};

// Complement block (sharp or smooth) is numerically singular at this
// spectral parameter.
struct NotInvertibleError : Error {
  using Error::Error;
};

// Cumulative dilation leakage exceeded the configured budget.
struct FlowTruncatedError : Error {
  using Error::Error;
};

// |w00[z;0]| left the admissible disc of the spectral-parameter map.
struct OutOfPolydiscError : Error {
  using Error::Error;
};

// An H_f eigenvalue sits inexactly within the tie tolerance of a
// projection boundary and overrides are off.
struct BoundaryTieError : Error {
  using Error::Error;
};

// Root finding could not bracket, or the sampled map was not monotone.
struct BracketError : Error {
  using Error::Error;
};

}  // namespace fockrg
