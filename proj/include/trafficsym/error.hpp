#pragma once

#include <stdexcept>
#include <string>

namespace trafficsym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point (or stencil) lies outside the validity domain of a field, or a
/// catalog entry's parameter constraints are violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: bad entry specs, unknown names, missing keys.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that names something unknown or omits required keys.
class UsageError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A value that should be finite is not.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Density dropped to zero or below during a solver step.
class PositivityError : public Error {
 public:
  PositivityError(int cell, double time, const std::string& what)
      : Error(what), cell_(cell), time_(time) {}
  int cell() const { return cell_; }
  double time() const { return time_; }

 private:
  int cell_;
  double time_;
};

}  // namespace trafficsym
