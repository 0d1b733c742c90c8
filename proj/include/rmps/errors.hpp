#pragma once

#include <stdexcept>
#include <string>

namespace rmps {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the range an operation supports (p too large, etc.).
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a degree or dimension do not.
class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

/// A Schur dimension vanishes, so the Weingarten sum is undefined (n < p).
class SingularDimension : public Error {
 public:
  using Error::Error;
};

/// A stated hypothesis of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A trace expression does not describe a closed, balanced wiring.
class MalformedExpression : public Error {
 public:
  using Error::Error;
};

/// A reduced density matrix with (numerically) zero trace.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmps
