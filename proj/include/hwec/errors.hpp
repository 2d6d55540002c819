#pragma once

#include <stdexcept>
#include <string>

namespace hwec {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or schema rule.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Table or quadrature query outside the covered range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Field evaluation too close to a current filament.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or switching state machine did not settle.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Operating point at or beyond the critical current.
class NegativeMarginError : public Error {
 public:
  using Error::Error;
};

}  // namespace hwec
