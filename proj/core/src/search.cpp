#include "spectralset/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "detail/parallel.hpp"
#include "detail/rng.hpp"
#include "spectralset/bounds.hpp"

namespace spectralset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex steiner_point(const SupportFn& h) {
  if (h.fourier_degree() < 1) return Complex(0, 0);
  return Complex(h.cos_coeffs()(0), h.sin_coeffs()(0));
}

std::string omega_descriptor(const BoundaryMesh& mesh) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "support(K=%d,a0=%.9g,N=%d)",
                mesh.support.fourier_degree(), mesh.support.a0(),
                mesh.node_count());
  return buf;
}

Complex horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex v = coeffs.back();
  for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) v = v * z + *it;
  return v;
}

/// Node maximum of |p| over the mesh (no refinement; used inside the ascent).
double mesh_sup(const std::vector<Complex>& coeffs, const BoundaryMesh& mesh) {
  double sup = 0;
  for (const Complex& sigma : mesh.points) {
    sup = std::max(sup, std::abs(horner(coeffs, sigma)));
  }
  return sup;
}

/// Boundary sup of |p|: node max plus one parabolic refinement in theta
/// around the argmax node.
double boundary_sup(const Polynomial& p, const BoundaryMesh& mesh) {
  const int n = mesh.node_count();
  int kmax = 0;
  double vmax = -1;
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) {
    v[k] = std::abs(p.eval(mesh.points[k]));
    if (v[k] > vmax) {
      vmax = v[k];
      kmax = k;
    }
  }
  const double vm = v[(kmax + n - 1) % n];
  const double vp = v[(kmax + 1) % n];
  const double denom = vm - 2 * vmax + vp;
  if (denom < 0) {  // strictly concave through the three samples
    double offset = 0.5 * (vm - vp) / denom;
    offset = std::clamp(offset, -1.0, 1.0);
    const double dtheta = kTwoPi / n;
    const double theta = mesh.thetas[kmax] + offset * dtheta;
    vmax = std::max(vmax, std::abs(p.eval(mesh.support.boundary_point(theta))));
  }
  return vmax;
}

struct SimplexOutcome {
  Eigen::VectorXd v;
  double f = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

/// Nelder-Mead ascent of `value` with in-place normalization by `normalize`
/// before every evaluation. Vertices that cannot be normalized (identically
/// vanishing polynomials) evaluate to -inf and are replaced during shrink.
template <class Normalize, class Value>
SimplexOutcome simplex_ascend(Eigen::VectorXd v0, const Normalize& normalize,
                              const Value& value, std::mt19937_64& rng) {
  const int dim = static_cast<int>(v0.size());
  const int max_iter = 400 * dim;
  constexpr double kFTol = 1e-9;

  auto evaluate = [&](Eigen::VectorXd& v) -> double {
    if (!normalize(v)) return -std::numeric_limits<double>::infinity();
    return value(v);
  };

  std::vector<Eigen::VectorXd> x(dim + 1);
  std::vector<double> f(dim + 1);
  x[0] = v0;
  f[0] = evaluate(x[0]);
  for (int i = 1; i <= dim; ++i) {
    x[i] = v0;
    x[i](i - 1) += 0.15 * std::max(1.0, std::abs(v0(i - 1)));
    f[i] = evaluate(x[i]);
  }

  std::vector<int> order(dim + 1);
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return f[i] > f[j]; });
    const int best = order[0], lousy = order[dim - 1], worst = order[dim];
    if (std::isfinite(f[worst]) &&
        f[best] - f[worst] <= kFTol * std::max(1.0, std::abs(f[best]))) {
      converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i <= dim; ++i) {
      if (i != worst) centroid += x[i];
    }
    centroid /= dim;

    Eigen::VectorXd xr = centroid + (centroid - x[worst]);
    const double fr = evaluate(xr);
    if (fr > f[best]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - x[worst]);
      const double fe = evaluate(xe);
      if (fe > fr) {
        x[worst] = std::move(xe);
        f[worst] = fe;
      } else {
        x[worst] = std::move(xr);
        f[worst] = fr;
      }
      continue;
    }
    if (fr > f[lousy]) {
      x[worst] = std::move(xr);
      f[worst] = fr;
      continue;
    }
    if (fr > f[worst]) {
      Eigen::VectorXd xc = centroid + 0.5 * (centroid - x[worst]);
      const double fc = evaluate(xc);
      if (fc >= fr) {
        x[worst] = std::move(xc);
        f[worst] = fc;
        continue;
      }
    } else {
      Eigen::VectorXd xc = centroid - 0.5 * (centroid - x[worst]);
      const double fc = evaluate(xc);
      if (fc > f[worst]) {
        x[worst] = std::move(xc);
        f[worst] = fc;
        continue;
      }
    }
    // Shrink toward the best vertex; revive degenerate vertices randomly.
    for (int i = 0; i <= dim; ++i) {
      if (i == best) continue;
      x[i] = x[best] + 0.5 * (x[i] - x[best]);
      f[i] = evaluate(x[i]);
      if (!std::isfinite(f[i])) {
        for (int c = 0; c < dim; ++c) x[i](c) = detail::gaussian(rng);
        f[i] = evaluate(x[i]);
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= dim; ++i) {
    if (f[i] > f[best]) best = i;
  }
  return {x[best], f[best], converged};
}

std::vector<Complex> coeffs_of(const Eigen::VectorXd& v) {
  std::vector<Complex> c(static_cast<std::size_t>(v.size() / 2));
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = Complex(v(2 * j), v(2 * j + 1));
  }
  return c;
}

nlohmann::ordered_json matrix_record(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) {
    nlohmann::ordered_json re_row = nlohmann::ordered_json::array();
    nlohmann::ordered_json im_row = nlohmann::ordered_json::array();
    for (int j = 0; j < n; ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return {{"n", n}, {"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace

double ratio(const Operator& a, const Polynomial& p, const BoundaryMesh& mesh,
             const Tolerances& tol) {
  tol.validate();
  if (p.is_zero()) throw InputError("the ratio needs a nonzero polynomial");
  require_spectrum_inside(a, mesh.support);
  const double num = operator_norm(p.eval(a.matrix()));
  const double den = boundary_sup(p, mesh);
  if (!(den > 0)) {
    throw InputError("polynomial vanishes on the boundary mesh");
  }
  return num / den;
}

RatioResult maximize_ratio(const Operator& a, const BoundaryMesh& mesh,
                           int degree, int restarts, std::uint64_t seed,
                           const Tolerances& tol) {
  tol.validate();
  if (degree < 1) throw InputError("ratio maximization needs degree >= 1");
  if (restarts < 1) throw InputError("ratio maximization needs restarts >= 1");
  require_spectrum_inside(a, mesh.support);

  const int ncoef = degree + 1;
  const int dim = 2 * ncoef;
  const Matrix& mat = a.matrix();

  auto normalize = [&](Eigen::VectorXd& v) -> bool {
    const double sup = mesh_sup(coeffs_of(v), mesh);
    if (!(sup > 1e-150) || !std::isfinite(sup)) return false;
    v /= sup;
    return true;
  };
  auto value = [&](const Eigen::VectorXd& v) -> double {
    const auto coeffs = coeffs_of(v);
    Matrix pa = coeffs.back() * Matrix::Identity(mat.rows(), mat.cols());
    for (auto it = coeffs.rbegin() + 1; it != coeffs.rend(); ++it) {
      pa = pa * mat;
      pa += *it * Matrix::Identity(mat.rows(), mat.cols());
    }
    return operator_norm(pa);
  };

  // Warm start p = z - steiner_point, padded to the full coefficient space.
  const Complex c = steiner_point(mesh.support);
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(dim);
  warm(0) = -c.real();
  warm(1) = -c.imag();
  warm(2) = 1.0;
  const double warm_scale = std::max(1.0, warm.cwiseAbs().maxCoeff());

  std::vector<SimplexOutcome> outcomes(restarts);
  detail::parallel_for(restarts, [&](int r) {
    std::mt19937_64 rng(detail::derive_seed(seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd v0 = warm;
    if (r > 0) {
      // Restarts are perturbation-robustness probes of the warm start's
      // attractor, not global exploration: the simplex walks uphill readily,
      // and hotter jitter lets it drift onto boundary-flattening optima
      // (higher-coefficient Chebyshev-like tweaks) or the near-constant
      // ridge, drowning the strict local maximum the warm start exposes.
      for (int i = 0; i < dim; ++i) {
        v0(i) += 0.01 * warm_scale * detail::gaussian(rng);
      }
    }
    outcomes[r] = simplex_ascend(std::move(v0), normalize, value, rng);
  });

  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (outcomes[r].f > outcomes[best].f) best = r;
  }

  RatioResult result;
  result.matrix_hash = a.hash();
  result.omega = omega_descriptor(mesh);
  result.restarts_used = restarts;
  result.converged = outcomes[best].converged;

  // Report with the refined boundary sup; keep the warm start if the refined
  // evaluation ranks it higher (it is never lost).
  Polynomial warm_poly({-c, Complex(1, 0)});
  const double warm_ratio = ratio(a, warm_poly, mesh, tol);
  Polynomial found = std::isfinite(outcomes[best].f)
                         ? Polynomial(coeffs_of(outcomes[best].v))
                         : warm_poly;
  const double found_ratio =
      found.is_zero() ? 0.0 : ratio(a, found, mesh, tol);
  if (found_ratio >= warm_ratio) {
    result.ratio = found_ratio;
    result.polynomial = std::move(found);
  } else {
    result.ratio = warm_ratio;
    result.polynomial = std::move(warm_poly);
  }
  return result;
}

void FindingsLog::append_line(const std::string& json_line) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ofstream os(path_, std::ios::app);
  if (!os) throw InputError("cannot open findings file: " + path_);
  os << json_line << '\n';
  if (!os.flush()) throw InputError("cannot write findings file: " + path_);
}

TrialResult conjecture_trial(const Operator& a, const QParameter& q,
                             const TrialParams& params, FindingsLog* log) {
  params.tol.validate();
  if (a.is_scalar_multiple_of_identity()) {
    throw InputError("conjecture trials need a matrix that is not a scalar "
                     "multiple of the identity");
  }
  if (!(params.smooth_eps >= 0) || !std::isfinite(params.smooth_eps)) {
    throw InputError("smooth_eps must be finite and >= 0");
  }
  const AscentOptions ascent{params.ascent_restarts,
                             detail::derive_seed(params.seed, 0x0a5ce27), 400};
  Tolerances fit_tol = params.tol;
  fit_tol.curvature_tol = std::max(fit_tol.curvature_tol, params.smooth_eps);
  // |q| = 1 degenerates Omega_q to W(A); the q-range fit is defined for
  // |q| < 1 only.
  SupportFn omega_q =
      q.t() == 0
          ? numrange_body(a, params.grid_n, params.fourier_k, fit_tol)
          : qrange_body(a, q, params.grid_n, params.fourier_k, fit_tol, ascent);
  if (params.smooth_eps > 0) {
    omega_q = omega_q.minkowski_smoothed(params.smooth_eps);
  }
  const BoundaryMesh mesh = boundary_mesh(omega_q, params.grid_n, params.tol);

  TrialResult out;
  out.best = maximize_ratio(a, mesh, params.degree, params.restarts,
                            params.seed, params.tol);
  out.max_ratio = out.best.ratio;
  out.bound = conjecture_constant(q);
  out.violation = out.max_ratio > out.bound + 1e-6;

  nlohmann::ordered_json rec;
  rec["matrix"] = matrix_record(a.matrix());
  rec["q_abs"] = q.abs();
  rec["degree"] = params.degree;
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  for (Complex ck : out.best.polynomial.coefficients()) {
    coeffs.push_back({ck.real(), ck.imag()});
  }
  rec["coeffs"] = std::move(coeffs);
  rec["ratio"] = out.max_ratio;
  rec["bound"] = out.bound;
  rec["violation"] = out.violation;
  rec["seed"] = params.seed;
  out.finding_json = rec.dump();

  if (log) log->append_line(out.finding_json);
  return out;
}

Operator make_ensemble(EnsembleKind kind, int n, std::uint64_t seed,
                       const EnsembleOptions& opts) {
  if (n < 1) throw InputError("ensemble matrices need n >= 1");
  std::mt19937_64 rng(
      detail::derive_seed(seed, static_cast<std::uint64_t>(kind) + 0x9000));
  Matrix m = Matrix::Zero(n, n);
  switch (kind) {
    case EnsembleKind::ginibre: {
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = scale * detail::complex_gaussian(rng);
      }
      break;
    }
    case EnsembleKind::jordan: {
      for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = opts.jordan_offdiag;
      break;
    }
    case EnsembleKind::nilpotent_shift: {
      for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
      break;
    }
    case EnsembleKind::perturbed_normal: {
      Vector eigs(n);
      for (int i = 0; i < n; ++i) eigs(i) = detail::complex_gaussian(rng);
      Matrix g(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = detail::complex_gaussian(rng);
      }
      const Matrix u = Eigen::HouseholderQR<Matrix>(g).householderQ();
      m = u * eigs.asDiagonal() * u.adjoint();
      Matrix e(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) e(i, j) = detail::complex_gaussian(rng);
      }
      const double enorm = operator_norm(e);
      if (enorm > 0) m += (opts.perturbation_eps / enorm) * e;
      break;
    }
  }
  return Operator(std::move(m));
}

}  // namespace spectralset
