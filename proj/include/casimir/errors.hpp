#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (nonpositive gap,
/// nonpositive frequency, malformed model parameters, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when a permittivity is requested from an ideal mirror. Callers
/// should use the fixed reflection coefficients instead.
class PerfectMirrorError : public DomainError {
 public:
  PerfectMirrorError()
      : DomainError("perfect mirror has no permittivity: use reflection-coefficient shortcut") {}
};

/// A quadrature, series or extrapolation did not reach the requested
/// tolerance. Carries the best estimate obtained.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// A divergence fit whose design matrix is too ill-conditioned to trust.
class IllConditionedFitError : public ConvergenceError {
 public:
  IllConditionedFitError(const std::string& what, double condition_number)
      : ConvergenceError(what, condition_number, condition_number) {}

  double condition_number() const noexcept { return best_estimate(); }
};

/// The quadratic form of a lattice model is not positive definite.
class ModelInstabilityError : public Error {
 public:
  ModelInstabilityError(const std::string& what, std::string offender)
      : Error(what), offender_(std::move(offender)) {}

  const std::string& offender() const noexcept { return offender_; }

 private:
  std::string offender_;
};

/// Malformed or inconsistent command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace casimir
