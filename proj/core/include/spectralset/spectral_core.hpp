#pragma once

#include <vector>

#include "spectralset/types.hpp"

namespace spectralset {

struct HermitianExtremes {
  double lambda_min = 0;
  double lambda_max = 0;
};

struct GershgorinDisc {
  Complex center;
  double radius = 0;
};

/// Largest singular value of A.
double operator_norm(const Operator& a);
double operator_norm(const Matrix& a);

/// Extreme eigenvalues of a Hermitian matrix. Requires ||H - H*|| <= eig_tol * ||H||.
HermitianExtremes hermitian_extremes(const Operator& h, const Tolerances& tol = {});
HermitianExtremes hermitian_extremes(const Matrix& h, const Tolerances& tol = {});

/// (sigma*I - A)^{-1}. Throws SingularityError when sigma*I - A is singular to
/// working precision (condition number above tol.cond_cap or residual above
/// tol.eig_tol).
Operator resolvent(const Operator& a, Complex sigma, const Tolerances& tol = {});
Matrix resolvent(const Matrix& a, Complex sigma, const Tolerances& tol = {});

/// r(sigma) = inf_{||y||=1} ||(sigma*I - A)^{-1} y||^2 = 1 / ||sigma*I - A||^2.
double min_resolvent_modulus(const Operator& a, Complex sigma,
                             const Tolerances& tol = {});

/// Row discs {z : |z - a_ii| <= sum_{j != i} |a_ij|}. Their union encloses the
/// spectrum; used as a cheap enclosure before exact eigenvalue checks.
std::vector<GershgorinDisc> gershgorin_discs(const Operator& a);

/// Radius of a disc centered at `center` covering every Gershgorin disc.
double gershgorin_enclosure_radius(const Operator& a, Complex center);

/// Exact eigenvalues (dense nonsymmetric solve); helper for domain checks.
std::vector<Complex> spectrum(const Operator& a);

}  // namespace spectralset
