#pragma once

#include <stdexcept>
#include <string>

namespace ccsm {

// Base class for all library errors that stem from caller input or data,
// as opposed to internal invariant violations (those throw std::logic_error).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed arguments: indices out of range, inconsistent dimensions, values
// outside their documented domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// The weight vector does not have the structure an operation requires
// (e.g. a two-weight view requested on a vector with three distinct values).
class StructureError : public Error {
 public:
  using Error::Error;
};

// A brute-force enumeration or LP would exceed its configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The operation is only defined for a restricted setting (e.g. k == 2).
class ScopeError : public Error {
 public:
  using Error::Error;
};

// The weight/curvature condition required by the higher-class lifting
// closed form does not hold, so the cut is refused rather than generated.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

// A sampled monotonicity check failed.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

// Random instance generation could not produce a valid sample.
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccsm
