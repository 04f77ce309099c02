#pragma once

#include <stdexcept>
#include <string>

namespace chd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration input.
struct ConfigError : Error {
  using Error::Error;
};

// Evaluation outside the admissible domain (|s| >= 1 in logarithmic mode,
// initial data violating the interior margin, segment leaving (-1,1)).
struct DomainError : Error {
  using Error::Error;
};

// Parameter admissibility failure: the mass-bound interval touches +-1.
struct AdmissibilityError : Error {
  using Error::Error;
};

// Iterative solver failure (CG, Newton, or coupling sweeps).
struct SolverError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace chd
