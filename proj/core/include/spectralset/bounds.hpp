#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectralset/potential.hpp"
#include "spectralset/ranges.hpp"

namespace spectralset {

/// Spectral-constant estimate 1 + gamma1/2 + sqrt(2 + gamma1 + gamma1^2/4 + m).
/// Requires a nonnegative radicand; with m >= |gamma1| (which the quadrature
/// guarantees, m integrates |lambda_min| and gamma1 integrates -lambda_min)
/// the radicand is at least 2.
double constant_thm22(double gamma1, double m);

/// Spectral-constant estimate 1 + gamma1/2 + sqrt((1 + gamma1/2)^2 + a).
/// Requires a >= 0. Increasing in a, and in gamma1 for gamma1 >= -2.
double constant_thm25(double gamma1, double a);

/// Default test family for the a(Omega) lower estimate: centered monomials
/// (z - c)^k for k <= 8 with c the Steiner point of the body, plus 16 seeded
/// random polynomials of degree <= 8, all sup-normalized on the mesh.
std::vector<BoundaryFunction> default_test_family(const BoundaryMesh& mesh,
                                                  std::uint64_t seed);

/// Lower estimate of a(Omega) = sup over unit-sup-norm f of the Chebyshev
/// radius of the Cauchy transform g of conj(f): max over the family of
/// chebyshev_radius({g(z_k)}) with z_k mesh nodes pulled inward along the
/// normal (three mesh spacings, capped at half the minimal curvature radius).
/// The interior sampling plus the maximum principle keep this a LOWER bound.
double a_lower_estimate(const BoundaryMesh& mesh,
                        std::span<const BoundaryFunction> family,
                        const Tolerances& tol = {});

/// gamma(1) <= -(1/pi) (1/(w_Omega + 2 w_W))^2 min_rho(Omega) (|dOmega| - |dW|)
/// for W(A) with nonempty interior contained in Omega. `w_body` must be the
/// fitted numerical-range boundary of `a` (cross-checked at a few angles).
double geometric_gamma_bound(const Operator& a, const SupportFn& omega,
                             const SupportFn& w_body,
                             const Tolerances& tol = {});

/// gamma(1) on Omega_q bounded via the non-normality profile:
///   gamma(1) <= -(1/pi) (1/(w_{Omega_q} + 2 w_W))^2 min_rho(Omega_q) * t *
///               integral of m(theta).
/// Returns 0 at |q| = 1 (the factor t vanishes; the bound degenerates).
double qrange_gamma_bound(const Operator& a, const QParameter& q,
                          const SupportFn& omega_q, const SupportFn& w_body,
                          int n_theta = 256, const Tolerances& tol = {},
                          const AscentOptions& opts = {});

/// Conjectured spectral constant for Omega_q: max(1, 2|q|/(1+sqrt(1-|q|^2))).
/// Equals 2 at |q| = 1 and 1 for |q| <= 0.8.
double conjecture_constant(const QParameter& q);

/// Domain selector for report assembly.
struct OmegaSpec {
  enum class Kind { numerical_range, disk, qrange };

  Kind kind = Kind::numerical_range;
  Complex center;      // disk only
  double radius = 0;   // disk only

  static OmegaSpec numerical_range() { return {}; }
  static OmegaSpec disk(Complex center, double radius);
  static OmegaSpec scaled_qrange() { return {Kind::qrange, {}, 0}; }

  std::string describe() const;
};

struct PipelineParams {
  int grid_n = 512;
  int fourier_k = 64;
  std::optional<double> q_abs;
  int restarts = 32;
  std::uint64_t seed = 0;
  Tolerances tol;
};

/// Everything the pipeline produced for one matrix/domain pair. Optional
/// fields are absent when their theorem does not apply: the geometric bound
/// needs W(A) with nonempty interior contained in Omega, the q-range fields
/// need a q parameter.
struct BoundsReport {
  double gamma1 = 0;
  double m_total = 0;
  double a_lower = 0;
  bool a_lower_is_estimate = true;  // always: family is finite
  double const_thm22 = 0;
  double const_thm25 = 0;           // computed with a_lower, see note in JSON
  std::optional<double> geo_gamma_bound;
  std::optional<double> qrange_gamma_bound;
  std::optional<double> conjecture_constant;

  int n = 0;
  std::optional<double> q_abs;
  int grid_n = 0;
  int fourier_k = 0;
  std::uint64_t seed = 0;
  int restarts = 0;
  Tolerances tol;
  std::string matrix_hash;
  std::string omega;
  int family_size = 0;
  double perimeter = 0;
  double w_omega = 0;
  double rho_min = 0;
  double partition_defect = 0;

  /// Fixed field order, full double precision; absent optionals are omitted.
  std::string to_json() const;
};

/// Full pipeline: ranges -> geometry -> potential -> bounds. Deterministic
/// given the seed. Errors carry the failing stage in their message; flat
/// numerical-range boundaries propagate as NonSmoothBoundary with guidance.
BoundsReport assemble_report(const Operator& a, const OmegaSpec& omega,
                             const PipelineParams& params = {});

}  // namespace spectralset
