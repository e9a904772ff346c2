#pragma once

#include <stdexcept>
#include <string>

namespace qpwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, out-of-range parameters, unparsable files.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Index or lattice block shape does not match the lattice.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An enumeration or convolution would exceed the configured work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// An exact integer relation among the generators was found.
class ResonantLatticeError : public Error {
 public:
  using Error::Error;
};

/// Two routes to the same quantity disagree beyond tolerance.
class NumericConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Fixed-point iteration did not reach tolerance within the iteration cap.
class NonContractionError : public Error {
 public:
  NonContractionError(const std::string& what, double ratio)
      : Error(what), ratio_(ratio) {}
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

/// A construction produced an empty object where one was expected.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Exact rational arithmetic left the 64-bit range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace qpwave
