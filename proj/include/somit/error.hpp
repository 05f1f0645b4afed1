#pragma once

#include <stdexcept>
#include <string>

namespace somit {

// Failure categories. The CLI maps each to a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad labels, ranges, shapes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numeric kernel could not produce a trustworthy answer.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Filesystem or parse failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace somit
