#pragma once

#include <stdexcept>
#include <string>

namespace spillover {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, panels, configs).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce a valid result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace spillover
