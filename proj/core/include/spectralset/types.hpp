#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "spectralset/errors.hpp"

namespace spectralset {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared across the library. All values must be > 0.
struct Tolerances {
  double eig_tol = 1e-10;        // Hermiticity / spectrum proximity checks
  double quad_tol = 1e-8;        // quadrature identity checks
  double psd_tol = 1e-8;         // positive-semidefiniteness slack
  double curvature_tol = 1e-8;   // convexity slack for support functions
  double cond_cap = 1e12;        // condition-number cap for resolvent solves

  void validate() const {
    if (!(eig_tol > 0) || !(quad_tol > 0) || !(psd_tol > 0) ||
        !(curvature_tol > 0) || !(cond_cap > 0)) {
      throw InputError("tolerances must all be positive");
    }
  }
};

/// A finite-dimensional operator on C^n: a dense complex n x n matrix with
/// finite entries. Immutable after construction.
class Operator {
 public:
  explicit Operator(Matrix entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

  /// True if A = c*I for some scalar c, up to `tol` relative to the scale of A.
  bool is_scalar_multiple_of_identity(double tol = 1e-12) const;

  /// FNV-1a over the raw entry bytes; stable identifier for reports.
  std::string hash() const;

 private:
  Matrix entries_;
};

}  // namespace spectralset
