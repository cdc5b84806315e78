#pragma once

#include <stdexcept>
#include <string>

namespace discofield {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Gauss-Hermite order too small for the requested moment degree.
class QuadratureUnderResolved : public Error {
 public:
  using Error::Error;
};

/// Inner product requested between states of different Gaussian families.
class FamilyMismatch : public Error {
 public:
  using Error::Error;
};

/// Grid spacing exceeds the resolution bound for the target state family.
class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

/// Operator handed to a Hermitian-only routine fails the Hermiticity gate.
class NotHermitian : public Error {
 public:
  using Error::Error;
};

/// Iterative eigen/singular solver ran out of iterations.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// Requested product-basis dimension exceeds the configured cap.
class DimensionCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Operation requires a diagonal dispersion-codispersion tensor.
class NonDiagonalUnsupported : public Error {
 public:
  using Error::Error;
};

/// A spacelike mean momentum was handed to an on-shell-only path.
class SpacelikeMomentum : public Error {
 public:
  using Error::Error;
};

/// Candidate/solution cannot be evaluated (wrong arity, cap exceeded, ...).
class NotEvaluable : public Error {
 public:
  using Error::Error;
};

/// Config file is not well-formed JSON; message carries the byte position.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Config is well-formed but violates an invariant; message names it.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace discofield
