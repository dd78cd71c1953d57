#pragma once

#include <stdexcept>
#include <string>

namespace resdep {

/// Exit codes reported by the command-line tool.
enum class ExitCode : int { Ok = 0, Usage = 2, Data = 3, NumericDomain = 4 };

/// Base class for every error raised by the library. Each subclass maps to
/// one CLI exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept = 0;
};

// Bad user input: unknown flags, malformed config entries, invalid model
// parameters.
class UsageError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::Usage; }
};

class ParameterError : public UsageError {
 public:
  using UsageError::UsageError;
};

// Problems with the data itself: unreadable files, parse failures, ties in
// strict mode, too few rows after filtering.
class DataError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::Data; }
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class TieError : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

// Numeric-domain failures: order-statistic index out of range, nonpositive
// thresholds, variance undefined for a*eta >= 1/2, failed second-order fits.
class DomainError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override {
    return ExitCode::NumericDomain;
  }
};

class BoundsError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Raised when the asymptotic variance (and therefore a confidence interval)
/// does not exist for the requested (a, eta).
class VarianceDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConstraintError : public DomainError {
 public:
  using DomainError::DomainError;
};

class EstimationError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace resdep
