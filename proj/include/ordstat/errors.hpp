#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordstat {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-side contract was violated (bad argument, out-of-range k,
/// infeasible bound precondition, malformed input). The CLI maps these
/// to exit status 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RangeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// k + k0 <= n fails for the k-max bounds; carries the smallest admissible n.
class InfeasibleError : public PreconditionError {
 public:
  InfeasibleError(const std::string& what, std::size_t required_n)
      : PreconditionError(what), required_n_(required_n) {}
  std::size_t required_n() const noexcept { return required_n_; }

 private:
  std::size_t required_n_;
};

/// Evaluation outside a tabulated distribution's range, or an unusable table.
class TabulationError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Input file parse failure; line is 1-based (0 when not line-specific).
class ParseError : public PreconditionError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : PreconditionError(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Internal numeric failure. The CLI maps these to exit status 1.
class NumericError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : NumericError(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// The modular sum never drops to 1 (norm functional is +infinity).
class UnboundedError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace ordstat
