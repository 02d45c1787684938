#pragma once

#include <stdexcept>
#include <string>

namespace fracdir {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameters valid in principle but not supported by the selected
/// evaluation path (callers should switch to another path).
class UnsupportedParameterError : public Error {
 public:
  using Error::Error;
};

/// A series evaluation could not produce a trustworthy value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double partial_sum, int terms)
      : Error(what), partial_sum_(partial_sum), terms_(terms) {}

  double partial_sum() const noexcept { return partial_sum_; }
  int terms() const noexcept { return terms_; }

 private:
  double partial_sum_;
  int terms_;
};

/// An integrand returned NaN or infinity.
class IntegrandError : public Error {
 public:
  IntegrandError(const std::string& what, double abscissa)
      : Error(what), abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

/// Adaptive quadrature or series did not reach the requested tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double partial_value,
                      double error_estimate)
      : Error(what), partial_value_(partial_value),
        error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

/// File or stream could not be read or written, or its content is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracdir
