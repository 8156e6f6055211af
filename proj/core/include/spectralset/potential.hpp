#pragma once

#include <iosfwd>
#include <vector>

#include "spectralset/convex_geometry.hpp"
#include "spectralset/polynomial.hpp"
#include "spectralset/spectral_core.hpp"

namespace spectralset {

/// Scalar function on boundary mesh nodes, together with its sup norm there.
/// Built from polynomials; that is the only shipped constructor.
struct BoundaryFunction {
  std::vector<Complex> values;
  double sup_norm = 0;

  static BoundaryFunction from_polynomial(const Polynomial& p,
                                          const BoundaryMesh& mesh);
  static BoundaryFunction ones(const BoundaryMesh& mesh);
};

/// Double-layer potential of A along a boundary mesh:
///   mu(sigma_k, A) = tau_k/(2 pi i) (sigma_k I - A)^{-1} + adjoint,
/// stored with each node's smallest eigenvalue. The mesh is the one actually
/// used (it may be a dyadic refinement of the mesh passed in).
struct PotentialProfile {
  BoundaryMesh mesh;
  std::vector<Matrix> mu;
  std::vector<double> lambda_min;

  int node_count() const { return static_cast<int>(mu.size()); }
};

struct ProfileOptions {
  /// Double the node count (up to 4096) until the partition identity
  /// sum_k mu_k w_k = 2I holds within quad_tol.
  bool allow_refinement = true;
};

/// Distance from z to the boundary of the body along support directions,
/// sampled densely. Positive iff z is strictly inside (convexity).
double support_distance(const SupportFn& h, Complex z);

/// Throws DomainError unless the spectrum of A is strictly inside the body.
/// Gershgorin quick pass first, exact eigenvalues as fallback (Gershgorin is
/// an over-enclosure and rejects perfectly valid non-normal matrices).
void require_spectrum_inside(const Operator& a, const SupportFn& h);

/// Potential matrix at one boundary point with unit tangent `tangent`.
Matrix mu_at(const Operator& a, Complex sigma, Complex tangent,
             const Tolerances& tol = {});

/// Assemble the potential on every mesh node. Requires the spectrum of A
/// strictly inside the body (Gershgorin quick pass, exact eigenvalue check as
/// fallback). Enforces the partition identity, refining dyadically up to 4096
/// nodes when allowed.
PotentialProfile potential_profile(const Operator& a, const BoundaryMesh& mesh,
                                   const Tolerances& tol = {},
                                   const ProfileOptions& opts = {});

/// gamma(f) = -integral of lambda_min(mu) f ds (fixed-order quadrature sum).
Complex gamma(const PotentialProfile& profile, const BoundaryFunction& f);

/// Re(gamma(1)); asserts |Im gamma(1)| <= quad_tol.
double gamma1(const PotentialProfile& profile, const Tolerances& tol = {});

/// m = integral of |lambda_min(mu)| ds.
double m_total(const PotentialProfile& profile);

/// Cauchy functional calculus f(A) = 1/(2 pi i) sum_k f_k R(sigma_k) tau_k w_k.
Matrix cauchy_fcalc(const Operator& a, const BoundaryMesh& mesh,
                    const BoundaryFunction& f, const Tolerances& tol = {});

/// g(A) = 1/(2 pi i) sum_k conj(f_k) R(sigma_k) tau_k w_k.
Matrix cauchy_transform_op(const Operator& a, const BoundaryMesh& mesh,
                           const BoundaryFunction& f, const Tolerances& tol = {});

/// Scalar Cauchy transform of conj(f) at a point z strictly inside the body
/// (at least two mesh spacings from the boundary).
Complex cauchy_transform_boundary(const BoundaryFunction& f,
                                  const BoundaryMesh& mesh, Complex z,
                                  const Tolerances& tol = {});

/// S = f(A) + g(A)^* + gamma(f) I for sup-normalized f. Checks the norm bound
/// ||S|| <= 2 + Re(gamma(1)) + psd_tol; violation signals quadrature failure.
Matrix s_operator(const Operator& a, const BoundaryMesh& mesh,
                  const BoundaryFunction& f, const Tolerances& tol = {});

/// CSV rows "theta,lambda_min,weight" at 17 significant digits.
void write_profile_csv(std::ostream& os, const PotentialProfile& profile);

}  // namespace spectralset
