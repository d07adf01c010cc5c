#pragma once

#include <stdexcept>
#include <string>

namespace heatbasis {

/// Base of every error raised by the library. `code()` is a short
/// machine-readable tag that the CLI echoes verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Bad arguments: violated preconditions, malformed geometry, bad config.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
  InvalidArgument(std::string code, const std::string& what) : Error(std::move(code), what) {}
};

/// Evaluation at a point where the quantity is singular or undefined.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain-error", what) {}
};

/// Argument combination outside the supported numerical range.
class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& what) : Error("out-of-range", what) {}
};

/// Iterative routine failed to converge within its budget.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error("convergence", what) {}
};

/// Matrix expected PSD carries a significantly negative pivot.
class NotPositiveSemidefinite : public Error {
 public:
  explicit NotPositiveSemidefinite(const std::string& what) : Error("not-psd", what) {}
};

/// Division by an eigenvalue too small to be trusted.
class TruncationRequired : public Error {
 public:
  explicit TruncationRequired(const std::string& what) : Error("truncation-required", what) {}
};

}  // namespace heatbasis
