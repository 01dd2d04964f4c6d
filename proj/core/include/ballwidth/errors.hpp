#pragma once

#include <stdexcept>
#include <string>

namespace ballwidth {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

struct UnsupportedDimension : Error {
  using Error::Error;
};

struct QuadratureDegreeError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

// No admissible solution: too few points, negative weights, rank budget too small.
struct InfeasibleError : Error {
  using Error::Error;
};

struct CertificationError : Error {
  using Error::Error;
};

}  // namespace ballwidth
