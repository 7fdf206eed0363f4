#pragma once

#include <stdexcept>
#include <string>

namespace kglab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an input value was violated (bad grid size, nonpositive constant, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quantity lies outside the domain of a physical formula (e.g. omega below the rest frequency).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The negative-frequency Klein-Gordon branch was handed to an API that treats states as physical.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// The operation does not apply to this dispersion kind.
class KindError : public Error {
 public:
  using Error::Error;
};

/// A state does not fit the grid: support too wide, spectrum reaching the Nyquist mode.
class BandwidthError : public Error {
 public:
  using Error::Error;
};

/// Array lengths do not match the grid they are supposed to live on.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace kglab
