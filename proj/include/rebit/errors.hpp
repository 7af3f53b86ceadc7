#pragma once

#include <stdexcept>
#include <string>

namespace rebit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A marginal density operator is rank deficient, so no invertible local
/// filter can bring the state into standard form.
class SingularMarginal : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure did not reach its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or state description.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rebit
