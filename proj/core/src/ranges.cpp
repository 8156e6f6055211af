#include "spectralset/ranges.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "detail/rng.hpp"

namespace spectralset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Eigenvalues closer than this to lambda_max count as one eigenspace.
constexpr double kEigGapTol = 1e-9;

Matrix hermitian_part(const Matrix& b) { return 0.5 * (b + b.adjoint()); }

Matrix rotated(const Matrix& a, double theta) {
  return std::polar(1.0, -theta) * a;
}

/// Objective of the scaled q-range support problem at fixed theta:
///   F(x) = x^* H x + t sqrt(s(x)),  s(x) = x^* G x - |x^* A x|^2
/// on the unit sphere, with H the Hermitian part of e^{-i theta} A and
/// G = A^* A. s is the squared norm of the component of Ax orthogonal to x.
struct QObjective {
  Matrix h;
  Matrix a;
  Matrix g;
  double t;

  double s_of(const Vector& x) const {
    const Complex w = x.dot(a * x);
    const double s = (x.dot(g * x)).real() - std::norm(w);
    return std::max(s, 0.0);
  }

  double value(const Vector& x) const {
    return (x.dot(h * x)).real() + t * std::sqrt(s_of(x));
  }

  /// Wirtinger gradient d F / d conj(x); valid while s(x) > 0.
  Vector gradient(const Vector& x) const {
    const Vector ax = a * x;
    const Complex w = x.dot(ax);
    const double s = std::max((x.dot(g * x)).real() - std::norm(w), 0.0);
    Vector grad = h * x;
    if (t > 0 && s > 1e-28) {
      const double c = t / (2.0 * std::sqrt(s));
      grad += c * (g * x - std::conj(w) * ax - w * (a.adjoint() * x));
    }
    return grad;
  }

  /// Hermitian linearization whose top eigenvector reproduces a critical
  /// point: at a maximizer, H_eff(x) x = lambda x.
  Matrix linearization(const Vector& x) const {
    const Complex w = x.dot(a * x);
    const double s = std::max((x.dot(g * x)).real() - std::norm(w), 0.0);
    Matrix m = h;
    if (t > 0 && s > 1e-28) {
      const double c = t / (2.0 * std::sqrt(s));
      m += c * (g - std::conj(w) * a - w * a.adjoint());
    }
    return m;
  }
};

/// Projected gradient ascent with backtracking line search, followed by a
/// safeguarded self-consistent polish (top eigenvector of the linearization,
/// accepted only while the objective increases). Two rounds; returns the best
/// objective value and leaves the iterate in x.
double ascend(const QObjective& obj, Vector& x, int max_iterations) {
  x.normalize();
  double f = obj.value(x);
  for (int round = 0; round < 2; ++round) {
    double eta = 0.1;
    for (int iter = 0; iter < max_iterations; ++iter) {
      const Vector grad = obj.gradient(x);
      const Vector tangent = grad - x * x.dot(grad);
      const double gn = tangent.norm();
      if (gn <= 1e-13 * (1.0 + std::abs(f))) break;
      bool improved = false;
      for (int trial = 0; trial < 40; ++trial) {
        const Vector y = (x + eta * tangent).normalized();
        const double fy = obj.value(y);
        if (fy > f + 1e-4 * eta * gn * gn) {
          x = y;
          f = fy;
          eta *= 1.5;
          improved = true;
          break;
        }
        eta *= 0.4;
        if (eta < 1e-18) break;
      }
      if (!improved) break;
    }
    for (int iter = 0; iter < 80; ++iter) {
      if (obj.t > 0 && obj.s_of(x) <= 1e-26) break;
      Eigen::SelfAdjointEigenSolver<Matrix> es(obj.linearization(x));
      if (es.info() != Eigen::Success) break;
      const Vector y = es.eigenvectors().col(x.size() - 1);
      const double fy = obj.value(y);
      if (fy > f + 1e-16 * (1.0 + std::abs(f))) {
        x = y;
        f = fy;
      } else {
        break;
      }
    }
  }
  return f;
}

}  // namespace

QParameter::QParameter(Complex q) : q_(q), abs_(std::abs(q)) {
  if (!std::isfinite(abs_) || !(abs_ > 0) || abs_ > 1.0) {
    throw InputError("q must satisfy 0 < |q| <= 1");
  }
  t_ = std::sqrt(std::max(0.0, 1.0 - abs_ * abs_)) / abs_;
}

double numrange_support(const Operator& a, double theta) {
  if (!std::isfinite(theta)) throw InputError("support angle must be finite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rotated(a.matrix(), theta)),
                                           Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("Hermitian eigensolve failed to converge");
  }
  return es.eigenvalues()(a.dim() - 1);
}

SupportFn numrange_body(const Operator& a, int n_samples, int degree,
                        const Tolerances& tol) {
  tol.validate();
  if (n_samples < 2 * degree + 1) {
    throw InputError("numerical range fit needs at least 2K+1 support samples");
  }
  std::vector<double> thetas(n_samples), values(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    thetas[j] = kTwoPi * j / n_samples;
    values[j] = numrange_support(a, thetas[j]);
  }
  return fit_support(thetas, values, degree, tol);
}

MaximizerSet maximizer_set(const Operator& a, double theta, double eps,
                           const Tolerances& tol) {
  tol.validate();
  if (!(eps >= 0)) throw InputError("eigenspace threshold must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rotated(a.matrix(), theta)));
  if (es.info() != Eigen::Success) {
    throw AccuracyError("Hermitian eigensolve failed to converge");
  }
  const int n = a.dim();
  const double lmax = es.eigenvalues()(n - 1);
  const double threshold = std::max(eps, kEigGapTol * std::max(1.0, std::abs(lmax)));
  int first = n - 1;
  while (first > 0 && lmax - es.eigenvalues()(first - 1) <= threshold) --first;
  MaximizerSet set;
  set.theta = theta;
  set.eigenvalue = lmax;
  set.basis = es.eigenvectors().rightCols(n - first);
  return set;
}

double m_theta(const Operator& a, double theta, const Tolerances& tol,
               const AscentOptions& opts) {
  tol.validate();
  if (a.is_scalar_multiple_of_identity()) return 0.0;
  const MaximizerSet set = maximizer_set(a, theta, 0.0, tol);
  const Matrix& v = set.basis;
  const int d = set.multiplicity();
  const Matrix g = a.matrix().adjoint() * a.matrix();
  if (d == 1) {
    const Vector x = v.col(0);
    const Complex w = x.dot(a.matrix() * x);
    return std::sqrt(std::max(0.0, (x.dot(g * x)).real() - std::norm(w)));
  }
  // Maximize s(c) = c^* Gs c - |c^* Bs c|^2 over the unit sphere of the
  // eigenspace. Reuse the ascent machinery with t = 1 and H = 0: then
  // F(c) = sqrt(s(c)), maximized at the same points.
  QObjective obj{Matrix::Zero(d, d), v.adjoint() * a.matrix() * v,
                 v.adjoint() * g * v, 1.0};
  std::mt19937_64 rng(detail::derive_seed(opts.seed, 0x6d7468u));
  double best = 0.0;
  const int starts = std::max(1, 8 * d);
  for (int r = 0; r < starts; ++r) {
    Vector c = r < d ? Vector(Vector::Unit(d, r)) : detail::random_unit_vector(rng, d);
    best = std::max(best, ascend(obj, c, opts.max_iterations));
  }
  return best;
}

double qrange_support(const Operator& a, const QParameter& q, double theta,
                      const AscentOptions& opts,
                      std::span<const Vector> warm_starts, Vector* maximizer) {
  if (!std::isfinite(theta)) throw InputError("support angle must be finite");
  if (opts.restarts < 1) throw InputError("ascent needs at least one start");
  const Matrix h = hermitian_part(rotated(a.matrix(), theta));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("Hermitian eigensolve failed to converge");
  }
  const int n = a.dim();
  const double lmax = es.eigenvalues()(n - 1);
  if (q.t() == 0) {
    if (maximizer) *maximizer = es.eigenvectors().col(n - 1);
    return lmax;  // |q| = 1: the q-range degenerates to W(A)
  }

  QObjective obj{h, a.matrix(), a.matrix().adjoint() * a.matrix(), q.t()};
  std::mt19937_64 rng(detail::derive_seed(opts.seed, 0x7172u));
  // Copy the warm starts up front; `maximizer` may alias one of them.
  std::vector<Vector> starts;
  starts.emplace_back(es.eigenvectors().col(n - 1));
  if (n >= 2) starts.emplace_back(es.eigenvectors().col(n - 2));
  for (const Vector& w : warm_starts) {
    if (w.size() == n && w.norm() > 0) starts.push_back(w);
  }
  while (static_cast<int>(starts.size()) < opts.restarts + 1) {
    starts.push_back(detail::random_unit_vector(rng, n));
  }
  double best = lmax;
  Vector best_x = starts[0];
  for (Vector x : starts) {
    const double f = ascend(obj, x, opts.max_iterations);
    if (f > best) {
      best = f;
      best_x = x;
    }
  }
  if (maximizer) *maximizer = best_x;
  return best;
}

SupportFn qrange_body(const Operator& a, const QParameter& q, int n_samples,
                      int degree, const Tolerances& tol, const AscentOptions& opts) {
  tol.validate();
  if (a.is_scalar_multiple_of_identity()) {
    throw InputError(
        "scaled q-range of a scalar multiple of the identity degenerates to a "
        "point; the body fit requires A != c*I");
  }
  if (q.t() == 0) {
    throw InputError(
        "the q-range body fit requires |q| < 1; at |q| = 1 the body equals "
        "the numerical range (use the numerical-range fit)");
  }
  if (n_samples < 2 * degree + 1) {
    throw InputError("q-range fit needs at least 2K+1 support samples");
  }
  std::vector<double> thetas(n_samples), values(n_samples), w_values(n_samples);
  // Chain the previous angle's maximizer as a warm start: support values then
  // vary smoothly in theta and the fit sees coherent optimizer noise.
  std::vector<Vector> chain(1, Vector());
  for (int j = 0; j < n_samples; ++j) {
    thetas[j] = kTwoPi * j / n_samples;
    w_values[j] = numrange_support(a, thetas[j]);
    values[j] = std::max(
        qrange_support(a, q, thetas[j], opts, chain, &chain[0]), w_values[j]);
  }
  SupportFn fit = fit_support(thetas, values, degree, tol);
  for (int j = 0; j < n_samples; ++j) {
    if (w_values[j] > fit.h(thetas[j]) + tol.quad_tol) {
      throw ConsistencyError(
          "fitted q-range fails to contain the numerical range at theta = " +
          std::to_string(thetas[j]));
    }
  }
  return fit;
}

PerimeterDerivativeCheck perimeter_derivative_check(const Operator& a,
                                                    double t_step, int n_theta,
                                                    const Tolerances& tol,
                                                    const AscentOptions& opts) {
  tol.validate();
  if (!(t_step > 0) || !std::isfinite(t_step)) {
    throw InputError("t_step must be positive and finite");
  }
  if (n_theta < 16) throw InputError("perimeter derivative check needs >= 16 angles");
  // Smoothness gate: a segment-like W(A) has no C^2 boundary parametrization.
  const int fit_degree = std::min(64, (n_theta - 1) / 2);
  (void)numrange_body(a, n_theta, fit_degree, tol);

  const QParameter q(1.0 / std::sqrt(1.0 + t_step * t_step));
  const double dtheta = kTwoPi / n_theta;
  double integral_m = 0, p0 = 0, pt = 0;
  std::vector<Vector> chain(1, Vector());
  for (int j = 0; j < n_theta; ++j) {
    const double theta = dtheta * j;
    const double hw = numrange_support(a, theta);
    integral_m += m_theta(a, theta, tol, opts) * dtheta;
    p0 += hw * dtheta;
    pt += std::max(qrange_support(a, q, theta, opts, chain, &chain[0]), hw) *
          dtheta;
  }
  return {integral_m, (pt - p0) / t_step};
}

}  // namespace spectralset
