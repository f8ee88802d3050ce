#pragma once

#include <stdexcept>
#include <string>

namespace starprod {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dimension too small for the requested label / state
struct TruncationError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
// quadrature or enumeration would exceed the configured budget
struct ResourceError : Error {
  using Error::Error;
};
struct StabilityError : Error {
  using Error::Error;
};
// vanishing denominator in a closed-form kernel
struct DegenerateError : Error {
  using Error::Error;
};
struct BranchError : Error {
  using Error::Error;
};
// tomographic frame with mu = 0 or nu = 0 where the formula is singular
struct DegenerateFrame : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace starprod
