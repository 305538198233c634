#pragma once

#include <stdexcept>
#include <string>

namespace ridgeboot {

// Exception hierarchy. The CLI maps each kind onto an exit code:
// usage -> 2, data/dimension -> 3, numerical -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Bad argument value or violated precondition on a scalar parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

// Malformed input files (CSV syntax, non-finite values, ...).
class DataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "data"; }
};

// SVD failure, rank-zero design, singular ridge system.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

std::string dims(long rows, long cols);

}  // namespace ridgeboot
