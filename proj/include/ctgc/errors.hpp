#pragma once

#include <stdexcept>
#include <string>

namespace ctgc {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// caller passed something out of contract
struct InputError : Error {
  using Error::Error;
};

// a model or kernel fails its stability condition
struct StabilityError : Error {
  using Error::Error;
};

// singular matrix, indefinite covariance, negative determinant, ...
struct NumericalError : Error {
  using Error::Error;
};

// a sequence was not extended far enough to decay, or a term cap was hit
struct TruncationError : Error {
  using Error::Error;
};

// an iterative solver did not reach its tolerance
struct ConvergenceError : Error {
  using Error::Error;
};

// a filter is not causal/invertible (minimum-phase)
struct FilterError : Error {
  using Error::Error;
};

// resolvent-type solve hit an exact singularity (e.g. eigenvalue pair summing to zero)
struct SingularityError : Error {
  using Error::Error;
};

}  // namespace ctgc
