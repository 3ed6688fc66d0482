#pragma once

#include <stdexcept>
#include <string>

namespace ionlab {

/// Base class of every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: bad bounds, negative tolerances, empty inputs.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (negative density,
/// coincident points, overlapping balls).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Problem too large for the requested method.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Ill-conditioned or degenerate one-particle basis.
class BasisError : public Error {
 public:
  using Error::Error;
};

/// Failure inside a dense/banded linear-algebra kernel.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Report payload cannot be rendered in the requested format.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace ionlab
