#include "spectralset/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <utility>

#include <nlohmann/json.hpp>

#include "detail/parallel.hpp"
#include "detail/rng.hpp"

namespace spectralset {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw InputError(std::string(name) + " must be finite");
  }
}

/// Steiner point of the body: first-harmonic coefficients of the support
/// function, (1/pi) integral of h(theta) e^{i theta}. Always inside the body.
Complex steiner_point(const SupportFn& h) {
  if (h.fourier_degree() < 1) return Complex(0, 0);
  return Complex(h.cos_coeffs()(0), h.sin_coeffs()(0));
}

BoundaryFunction normalized(BoundaryFunction f) {
  double sup = 0;
  for (Complex v : f.values) sup = std::max(sup, std::abs(v));
  if (!(sup > 0)) throw InputError("cannot normalize a vanishing boundary function");
  for (Complex& v : f.values) v /= sup;
  f.sup_norm = 1.0;
  return f;
}

/// (z - c)^k as explicit coefficients.
Polynomial centered_monomial(Complex c, int k) {
  std::vector<Complex> coeffs{Complex(1, 0)};
  for (int i = 0; i < k; ++i) {
    std::vector<Complex> next(coeffs.size() + 1, Complex(0, 0));
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      next[j] -= c * coeffs[j];
      next[j + 1] += coeffs[j];
    }
    coeffs = std::move(next);
  }
  return Polynomial(std::move(coeffs));
}

/// Interior Cauchy transform of conj(f); same sum as
/// cauchy_transform_boundary but with the distance check hoisted out (the
/// caller guarantees z is well inside).
Complex cauchy_inner_value(const BoundaryFunction& f, const BoundaryMesh& mesh,
                           Complex z) {
  Complex sum(0, 0);
  for (int k = 0; k < mesh.node_count(); ++k) {
    sum += std::conj(f.values[k]) * mesh.unit_tangents[k] *
           mesh.arclength_weights[k] / (mesh.points[k] - z);
  }
  return sum / Complex(0, kTwoPi);
}

/// The fitted numerical-range boundary handed in must actually belong to A.
void check_w_body(const Operator& a, const SupportFn& w_body) {
  double scale = 1e-300;
  for (int j = 0; j < 8; ++j) scale = std::max(scale, std::abs(w_body.h(kTwoPi * j / 8)));
  for (int j = 0; j < 8; ++j) {
    const double theta = kTwoPi * j / 8;
    if (std::abs(numrange_support(a, theta) - w_body.h(theta)) > 1e-6 * std::max(scale, 1.0)) {
      throw InputError("w_body does not match the numerical range of A");
    }
  }
}

}  // namespace

double constant_thm22(double gamma1, double m) {
  require_finite(gamma1, "gamma1");
  require_finite(m, "m");
  const double radicand = 2.0 + gamma1 + 0.25 * gamma1 * gamma1 + m;
  if (radicand < 0) {
    throw DomainError("negative radicand in the gamma/m spectral constant; "
                      "gamma1 and m are inconsistent (m should dominate |gamma1|)");
  }
  return 1.0 + 0.5 * gamma1 + std::sqrt(radicand);
}

double constant_thm25(double gamma1, double a) {
  require_finite(gamma1, "gamma1");
  require_finite(a, "a");
  if (a < 0) throw InputError("a(Omega) estimate must be nonnegative");
  const double half = 1.0 + 0.5 * gamma1;
  return 1.0 + 0.5 * gamma1 + std::sqrt(half * half + a);
}

std::vector<BoundaryFunction> default_test_family(const BoundaryMesh& mesh,
                                                  std::uint64_t seed) {
  constexpr int kMonomialMaxDegree = 8;
  constexpr int kRandomCount = 16;
  constexpr int kRandomDegree = 8;

  const Complex c = steiner_point(mesh.support);
  std::vector<BoundaryFunction> family;
  family.reserve(kMonomialMaxDegree + 1 + kRandomCount);
  for (int k = 0; k <= kMonomialMaxDegree; ++k) {
    auto f = BoundaryFunction::from_polynomial(centered_monomial(c, k), mesh);
    if (f.sup_norm > 0) family.push_back(normalized(std::move(f)));
  }
  std::mt19937_64 rng(seed);
  for (int r = 0; r < kRandomCount; ++r) {
    std::vector<Complex> coeffs(kRandomDegree + 1);
    for (Complex& ck : coeffs) ck = detail::complex_gaussian(rng);
    auto f = BoundaryFunction::from_polynomial(Polynomial(std::move(coeffs)), mesh);
    if (f.sup_norm > 0) family.push_back(normalized(std::move(f)));
  }
  return family;
}

double a_lower_estimate(const BoundaryMesh& mesh,
                        std::span<const BoundaryFunction> family,
                        const Tolerances& tol) {
  tol.validate();
  if (family.empty()) throw InputError("a(Omega) estimate needs a nonempty test family");
  for (const auto& f : family) {
    if (static_cast<int>(f.values.size()) != mesh.node_count()) {
      throw InputError("test family and mesh node counts differ");
    }
    if (!(f.sup_norm <= 1.0 + 1e-9)) {
      throw InputError("test family must be sup-normalized to 1");
    }
  }

  const int n_nodes = mesh.node_count();
  double rho_min = mesh.curvature_radii[0];
  for (double rho : mesh.curvature_radii) rho_min = std::min(rho_min, rho);
  // Inward offset: far enough from the boundary for the plain quadrature sum,
  // small enough that the pulled point stays inside (a curvature-radius cap).
  const double delta = std::min(3.0 * mesh.spacing(), 0.5 * rho_min);
  std::vector<Complex> inner(n_nodes);
  for (int k = 0; k < n_nodes; ++k) {
    inner[k] = mesh.points[k] - delta * mesh.outward_normals[k];
    if (!(support_distance(mesh.support, inner[k]) > 0.5 * delta)) {
      throw AccuracyError("mesh too coarse to sample the Cauchy transform inside "
                          "the body; refine the mesh");
    }
  }

  double best = 0;
  for (const auto& f : family) {
    std::vector<Complex> g(n_nodes);
    detail::parallel_for(n_nodes, [&](int k) { g[k] = cauchy_inner_value(f, mesh, inner[k]); });
    best = std::max(best, chebyshev_radius(g));
  }
  return best;
}

double geometric_gamma_bound(const Operator& a, const SupportFn& omega,
                             const SupportFn& w_body, const Tolerances& tol) {
  tol.validate();
  check_w_body(a, w_body);
  // Nonempty interior of W(A): the fitted boundary must be strictly convex.
  min_radius_of_curvature(w_body, tol);
  if (!contains(omega, w_body, tol)) {
    throw InputError("the geometric gamma bound needs W(A) contained in Omega");
  }
  const double w_om = farthest_point_modulus(omega);
  const double w_w = farthest_point_modulus(w_body);
  const double rho_min = min_radius_of_curvature(omega, tol);
  const double denom = w_om + 2.0 * w_w;
  return -(1.0 / kPi) * (1.0 / (denom * denom)) * rho_min *
         (perimeter(omega) - perimeter(w_body));
}

double qrange_gamma_bound(const Operator& a, const QParameter& q,
                          const SupportFn& omega_q, const SupportFn& w_body,
                          int n_theta, const Tolerances& tol,
                          const AscentOptions& opts) {
  tol.validate();
  if (q.t() == 0) return 0;  // |q| = 1: the fattening-rate factor vanishes
  if (n_theta < 16) throw InputError("the non-normality integral needs >= 16 angles");
  check_w_body(a, w_body);
  min_radius_of_curvature(w_body, tol);
  const double rho_min = min_radius_of_curvature(omega_q, tol);

  std::vector<double> m_values(n_theta);
  detail::parallel_for(n_theta, [&](int j) {
    m_values[j] = m_theta(a, kTwoPi * j / n_theta, tol, opts);
  });
  double integral_m = 0;
  for (double m : m_values) integral_m += m;
  integral_m *= kTwoPi / n_theta;

  const double w_om = farthest_point_modulus(omega_q);
  const double w_w = farthest_point_modulus(w_body);
  const double denom = w_om + 2.0 * w_w;
  return -(1.0 / kPi) * (1.0 / (denom * denom)) * rho_min * q.t() * integral_m;
}

double conjecture_constant(const QParameter& q) {
  const double qa = q.abs();
  return std::max(1.0, 2.0 * qa / (1.0 + std::sqrt(1.0 - qa * qa)));
}

OmegaSpec OmegaSpec::disk(Complex center, double radius) {
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()) ||
      !std::isfinite(radius) || !(radius > 0)) {
    throw InputError("disk domain needs a finite center and positive radius");
  }
  return {Kind::disk, center, radius};
}

std::string OmegaSpec::describe() const {
  switch (kind) {
    case Kind::numerical_range:
      return "W(A)";
    case Kind::qrange:
      return "Omega_q";
    case Kind::disk: {
      char buf[96];
      std::snprintf(buf, sizeof buf, "disk(%.17g,%.17g,%.17g)", center.real(),
                    center.imag(), radius);
      return buf;
    }
  }
  return "?";
}

std::string BoundsReport::to_json() const {
  nlohmann::ordered_json j;
  j["gamma1"] = gamma1;
  j["m_total"] = m_total;
  j["a_lower"] = a_lower;
  j["a_lower_is_estimate"] = a_lower_is_estimate;
  j["const_thm22"] = const_thm22;
  j["const_thm25"] = const_thm25;
  j["const_thm25_note"] =
      "computed with a_lower; the true constant uses a(Omega) >= a_lower";
  if (geo_gamma_bound) j["geo_gamma_bound"] = *geo_gamma_bound;
  if (qrange_gamma_bound) j["qrange_gamma_bound"] = *qrange_gamma_bound;
  if (conjecture_constant) j["conjecture_constant"] = *conjecture_constant;
  nlohmann::ordered_json meta;
  meta["n"] = n;
  if (q_abs) meta["q_abs"] = *q_abs;
  meta["grid_n"] = grid_n;
  meta["fourier_k"] = fourier_k;
  meta["seed"] = seed;
  meta["restarts"] = restarts;
  meta["tol"] = {{"eig_tol", tol.eig_tol},
                 {"quad_tol", tol.quad_tol},
                 {"psd_tol", tol.psd_tol},
                 {"curvature_tol", tol.curvature_tol},
                 {"cond_cap", tol.cond_cap}};
  meta["matrix_hash"] = matrix_hash;
  meta["omega"] = omega;
  meta["family_size"] = family_size;
  meta["perimeter"] = perimeter;
  meta["w_omega"] = w_omega;
  meta["rho_min"] = rho_min;
  meta["partition_defect"] = partition_defect;
  j["meta"] = std::move(meta);
  return j.dump(2);
}

namespace {

template <class F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const NonSmoothBoundary&) {
    throw;  // keeps its type so callers can report the flat direction
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

bool strictly_convex(const SupportFn& h, const Tolerances& tol) {
  try {
    min_radius_of_curvature(h, tol);
    return true;
  } catch (const NonSmoothBoundary&) {
    return false;
  }
}

}  // namespace

BoundsReport assemble_report(const Operator& a, const OmegaSpec& omega_spec,
                             const PipelineParams& params) {
  params.tol.validate();
  if (params.grid_n < 16) throw InputError("grid_n must be at least 16");
  if (params.fourier_k < 1 || 2 * params.fourier_k >= params.grid_n) {
    throw InputError("fourier_k must satisfy 1 <= fourier_k < grid_n/2");
  }
  std::optional<QParameter> q;
  if (params.q_abs) q.emplace(Complex(*params.q_abs, 0));
  if (omega_spec.kind == OmegaSpec::Kind::qrange && !q) {
    throw InputError("the scaled q-range domain needs a q parameter");
  }

  BoundsReport report;
  report.n = a.dim();
  report.q_abs = params.q_abs;
  report.grid_n = params.grid_n;
  report.fourier_k = params.fourier_k;
  report.seed = params.seed;
  report.restarts = params.restarts;
  report.tol = params.tol;
  report.matrix_hash = a.hash();
  report.omega = omega_spec.describe();

  const AscentOptions ascent{params.restarts, detail::derive_seed(params.seed, 0x0a5c), 400};

  // ranges: fit W(A); a flat boundary is fatal only when Omega = W(A).
  std::optional<SupportFn> w_fit;
  std::string w_flat_reason;
  double w_flat_theta = 0;
  run_stage("ranges", [&] {
    try {
      w_fit = numrange_body(a, params.grid_n, params.fourier_k, params.tol);
    } catch (const NonSmoothBoundary& e) {
      w_flat_reason = e.what();
      w_flat_theta = e.theta();
    }
    return 0;
  });

  // geometry: realize the domain and its mesh.
  SupportFn omega_fn = run_stage("geometry", [&]() -> SupportFn {
    switch (omega_spec.kind) {
      case OmegaSpec::Kind::numerical_range:
        if (!w_fit) {
          throw NonSmoothBoundary(
              "[geometry] " + w_flat_reason +
                  "; the numerical range is not a smooth domain here, supply "
                  "an explicit disk domain or a q parameter",
              w_flat_theta);
        }
        return *w_fit;
      case OmegaSpec::Kind::disk:
        return SupportFn::disk(omega_spec.center, omega_spec.radius);
      case OmegaSpec::Kind::qrange:
        // |q| = 1 degenerates Omega_q to W(A) itself.
        if (q->t() == 0) {
          if (!w_fit) {
            throw NonSmoothBoundary(
                "[geometry] " + w_flat_reason +
                    "; Omega_q at |q| = 1 is the numerical range, which is "
                    "not a smooth domain here",
                w_flat_theta);
          }
          return *w_fit;
        }
        return qrange_body(a, *q, params.grid_n, params.fourier_k, params.tol,
                           ascent);
    }
    throw InputError("unknown domain kind");
  });
  BoundaryMesh mesh = run_stage("geometry", [&]() -> BoundaryMesh {
    try {
      report.rho_min = min_radius_of_curvature(omega_fn, params.tol);
      return boundary_mesh(omega_fn, params.grid_n, params.tol);
    } catch (const NonSmoothBoundary& e) {
      if (omega_spec.kind == OmegaSpec::Kind::numerical_range) {
        throw NonSmoothBoundary(
            std::string("[geometry] ") + e.what() +
                "; the numerical range is degenerate here, supply an explicit "
                "disk domain or a q parameter",
            e.theta());
      }
      throw;
    }
  });
  report.perimeter = perimeter(omega_fn);
  report.w_omega = farthest_point_modulus(omega_fn);

  // potential: assemble mu on the mesh (dyadic refinement allowed).
  PotentialProfile profile = run_stage("potential", [&] {
    return potential_profile(a, mesh, params.tol);
  });
  run_stage("potential", [&] {
    report.gamma1 = gamma1(profile, params.tol);
    report.m_total = m_total(profile);
    Matrix sum = Matrix::Zero(a.dim(), a.dim());
    for (int k = 0; k < profile.node_count(); ++k) {
      sum += profile.mu[k] * profile.mesh.arclength_weights[k];
    }
    report.partition_defect =
        operator_norm(Matrix(sum - 2.0 * Matrix::Identity(a.dim(), a.dim())));
    return 0;
  });

  // bounds: constants, the a(Omega) estimate, and the geometric bounds that
  // apply to this matrix/domain pair.
  run_stage("bounds", [&] {
    const auto family =
        default_test_family(profile.mesh, detail::derive_seed(params.seed, 0xfa31));
    report.family_size = static_cast<int>(family.size());
    report.a_lower = a_lower_estimate(profile.mesh, family, params.tol);
    report.const_thm22 = constant_thm22(report.gamma1, report.m_total);
    report.const_thm25 = constant_thm25(report.gamma1, report.a_lower);

    const bool w_smooth = w_fit && strictly_convex(*w_fit, params.tol);
    if (w_smooth && contains(omega_fn, *w_fit, params.tol)) {
      report.geo_gamma_bound =
          geometric_gamma_bound(a, omega_fn, *w_fit, params.tol);
    }
    if (q) {
      report.conjecture_constant = conjecture_constant(*q);
      if (q->t() == 0) {
        report.qrange_gamma_bound = 0.0;
      } else if (w_smooth) {
        const SupportFn omega_q_fn =
            omega_spec.kind == OmegaSpec::Kind::qrange
                ? omega_fn
                : qrange_body(a, *q, params.grid_n, params.fourier_k,
                              params.tol, ascent);
        report.qrange_gamma_bound = qrange_gamma_bound(
            a, *q, omega_q_fn, *w_fit, 256, params.tol, ascent);
      }
    }
    return 0;
  });

  return report;
}

}  // namespace spectralset
