#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace spectralset {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract caller input (bad sizes, NaNs, invalid config).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of an operation was violated (e.g. a matrix
/// passed as Hermitian is not Hermitian within tolerance).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Resolvent evaluation too close to the spectrum; carries the offending point.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, std::complex<double> sigma)
      : Error(what), sigma_(sigma) {}
  std::complex<double> sigma() const { return sigma_; }

 private:
  std::complex<double> sigma_;
};

/// Boundary failed the curvature test; carries a direction where it is flat
/// or concave.
class NonSmoothBoundary : public Error {
 public:
  NonSmoothBoundary(const std::string& what, double theta)
      : Error(what), theta_(theta) {}
  double theta() const { return theta_; }

 private:
  double theta_;
};

/// Spectrum (or another required set) lies outside the admissible region.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested accuracy cannot be certified (quadrature too coarse, point too
/// close to the boundary, refinement exhausted).
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// An internal mathematical identity failed beyond tolerance. Indicates a
/// quadrature or optimizer failure rather than bad input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Pipeline failure wrapper; carries the stage that failed.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace spectralset
