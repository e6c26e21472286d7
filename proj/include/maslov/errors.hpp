#pragma once

#include <stdexcept>
#include <string>

namespace maslov {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument (shape, size, sample count) failed.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operation is undefined for the field of the input (e.g. a real-only
/// invariant asked of a complex frame).
class FieldError : public Error {
 public:
  using Error::Error;
};

/// Consecutive samples are too far apart for an unambiguous branch lift.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Keys of nerve, transition data, lifts or isomorphisms do not line up.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be an integer (or a root of unity) is not, within
/// tolerance.
class IntegralityError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be constant on a connected triple overlap varies.
class ConnectivityError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same invariant disagree.
class RouteMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace maslov
