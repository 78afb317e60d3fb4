#pragma once

#include <stdexcept>
#include <string>

namespace primerace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not reach its accuracy target.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at a pole (s = 1 of a Hurwitz zeta function).
class PoleError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// Series or quadrature did not converge; carries the best error bound reached.
class ConvergenceError : public ComputationError {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : ComputationError(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Zero scan found fewer (or more) zeros than the counting function allows.
class MissedZeroError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// Malformed or inconsistent data file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A stored zero failed re-verification.
class VerificationError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace primerace
