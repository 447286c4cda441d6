#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace kingman {

// Base of every numerical failure raised by the library. Domain errors on
// bad arguments derive from std::domain_error instead, so callers can tell
// "you asked for something undefined" from "the method could not deliver".
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Quadrature did not reach tolerance within its node budget.
class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, std::complex<double> best, double err_est)
      : NumericalError(what), best_(best), err_est_(err_est) {}
  std::complex<double> best() const noexcept { return best_; }
  double err_est() const noexcept { return err_est_; }

 private:
  std::complex<double> best_;
  double err_est_;
};

class EvaluationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The alternating series would need more mantissa bits than allowed.
class PrecisionExhausted : public NumericalError {
 public:
  PrecisionExhausted(const std::string& what, long required_bits)
      : NumericalError(what), required_bits_(required_bits) {}
  long required_bits() const noexcept { return required_bits_; }

 private:
  long required_bits_;
};

class NotInTail : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MajorantFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PoleProximity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BranchCut : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegerThetaRequired : public DomainError {
 public:
  using DomainError::DomainError;
};

class TailCertificateFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StiffnessFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace kingman
