#pragma once

#include <stdexcept>
#include <string>

namespace awmi {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or violated precondition (maps to CLI exit code 1).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Unreadable, unwritable or malformed file (maps to CLI exit code 2).
class IoError : public Error {
 public:
  using Error::Error;
};

/// A quantity is undefined for the given input, e.g. the centroid of an all-zero raster.
class UndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace awmi
