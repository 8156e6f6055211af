#include "spectralset/convex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace spectralset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int dense_grid_size(int degree) { return std::max(2048, 16 * std::max(degree, 1)); }

/// Parabolic refinement of a grid extremum of a smooth periodic function.
/// f0, f1, f2 are values at three consecutive grid points with spacing dx;
/// returns the extremum value of the interpolating parabola.
double parabolic_extremum(double f0, double f1, double f2) {
  const double denom = f0 - 2.0 * f1 + f2;
  if (denom == 0) return f1;
  const double s = 0.5 * (f0 - f2) / denom;  // offset in grid units, |s| <= 1
  if (std::abs(s) > 1.0) return f1;
  return f1 - 0.25 * (f0 - f2) * s;
}

}  // namespace

SupportFn::SupportFn(double a0, RealVector a, RealVector b, double fit_residual)
    : a0_(a0), a_(std::move(a)), b_(std::move(b)), fit_residual_(fit_residual) {
  if (a_.size() != b_.size()) {
    throw InputError("support function coefficient arrays must have equal length");
  }
  if (!std::isfinite(a0_) || !a_.allFinite() || !b_.allFinite()) {
    throw InputError("support function coefficients must be finite");
  }
}

SupportFn SupportFn::disk(Complex center, double radius) {
  if (!(radius > 0) || !std::isfinite(radius) || !std::isfinite(std::abs(center))) {
    throw InputError("disc radius must be positive and finite");
  }
  RealVector a(1), b(1);
  a(0) = center.real();
  b(0) = center.imag();
  return SupportFn(radius, a, b);
}

double SupportFn::h(double theta) const {
  double v = a0_;
  for (int k = 1; k <= fourier_degree(); ++k) {
    v += a_(k - 1) * std::cos(k * theta) + b_(k - 1) * std::sin(k * theta);
  }
  return v;
}

double SupportFn::dh(double theta) const {
  double v = 0;
  for (int k = 1; k <= fourier_degree(); ++k) {
    v += k * (-a_(k - 1) * std::sin(k * theta) + b_(k - 1) * std::cos(k * theta));
  }
  return v;
}

double SupportFn::d2h(double theta) const {
  double v = 0;
  for (int k = 1; k <= fourier_degree(); ++k) {
    v -= double(k) * k *
         (a_(k - 1) * std::cos(k * theta) + b_(k - 1) * std::sin(k * theta));
  }
  return v;
}

Complex SupportFn::boundary_point(double theta) const {
  const Complex dir(std::cos(theta), std::sin(theta));
  return h(theta) * dir + dh(theta) * Complex(0, 1) * dir;
}

SupportFn SupportFn::minkowski_smoothed(double eps) const {
  if (!(eps >= 0) || !std::isfinite(eps)) {
    throw InputError("smoothing radius must be nonnegative");
  }
  return SupportFn(a0_ + eps, a_, b_, fit_residual_);
}

SupportFn fit_support(std::span<const double> thetas,
                      std::span<const double> values, int degree,
                      const Tolerances& tol) {
  tol.validate();
  if (degree < 0) throw InputError("Fourier degree must be nonnegative");
  const int m = static_cast<int>(thetas.size());
  if (values.size() != thetas.size()) {
    throw InputError("sample angle and value arrays must have equal length");
  }
  if (m < 2 * degree + 1) {
    throw InputError("trigonometric fit needs at least 2K+1 samples");
  }
  for (double t : thetas) {
    if (!std::isfinite(t)) throw InputError("sample angles must be finite");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("sample values must be finite");
  }

  Eigen::MatrixXd design(m, 2 * degree + 1);
  Eigen::VectorXd rhs(m);
  for (int j = 0; j < m; ++j) {
    design(j, 0) = 1.0;
    for (int k = 1; k <= degree; ++k) {
      design(j, 2 * k - 1) = std::cos(k * thetas[j]);
      design(j, 2 * k) = std::sin(k * thetas[j]);
    }
    rhs(j) = values[j];
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < design.cols()) {
    throw InputError("trigonometric fit is rank deficient; sample angles must be distinct");
  }
  Eigen::VectorXd coef = qr.solve(rhs);
  const double residual = (design * coef - rhs).cwiseAbs().maxCoeff();

  RealVector a(degree), b(degree);
  for (int k = 1; k <= degree; ++k) {
    a(k - 1) = coef(2 * k - 1);
    b(k - 1) = coef(2 * k);
  }
  SupportFn fn(coef(0), a, b, residual);

  const int grid = dense_grid_size(degree);
  for (int j = 0; j < grid; ++j) {
    const double theta = kTwoPi * j / grid;
    if (fn.curvature_radius(theta) < -tol.curvature_tol) {
      throw NonSmoothBoundary(
          "fitted support function is not convex: h + h'' < 0 at theta = " +
              std::to_string(theta),
          theta);
    }
  }
  return fn;
}

BoundaryMesh boundary_mesh(const SupportFn& h, int n_nodes, const Tolerances& tol) {
  tol.validate();
  if (n_nodes < 16) throw InputError("boundary mesh needs at least 16 nodes");
  BoundaryMesh mesh{h, {}, {}, {}, {}, {}, {}};
  mesh.thetas.resize(n_nodes);
  mesh.points.resize(n_nodes);
  mesh.outward_normals.resize(n_nodes);
  mesh.unit_tangents.resize(n_nodes);
  mesh.arclength_weights.resize(n_nodes);
  mesh.curvature_radii.resize(n_nodes);
  const double dtheta = kTwoPi / n_nodes;
  for (int k = 0; k < n_nodes; ++k) {
    const double theta = dtheta * k;
    const double rho = h.curvature_radius(theta);
    if (!(rho > 0)) {
      throw NonSmoothBoundary(
          "boundary is not strictly convex at theta = " + std::to_string(theta),
          theta);
    }
    const Complex dir(std::cos(theta), std::sin(theta));
    mesh.thetas[k] = theta;
    mesh.points[k] = h.boundary_point(theta);
    mesh.outward_normals[k] = dir;
    mesh.unit_tangents[k] = Complex(0, 1) * dir;
    mesh.arclength_weights[k] = rho * dtheta;
    mesh.curvature_radii[k] = rho;
  }
  return mesh;
}

double BoundaryMesh::total_weight() const {
  double s = 0;
  for (double w : arclength_weights) s += w;
  return s;
}

double BoundaryMesh::spacing() const {
  return total_weight() / std::max(node_count(), 1);
}

double perimeter(const SupportFn& h) { return kTwoPi * h.a0(); }

double min_radius_of_curvature(const SupportFn& h, const Tolerances& tol) {
  tol.validate();
  const int grid = dense_grid_size(h.fourier_degree());
  double best = std::numeric_limits<double>::infinity();
  int best_j = 0;
  for (int j = 0; j < grid; ++j) {
    const double v = h.curvature_radius(kTwoPi * j / grid);
    if (v < best) {
      best = v;
      best_j = j;
    }
  }
  const double dx = kTwoPi / grid;
  const double f0 = h.curvature_radius(dx * (best_j - 1));
  const double f2 = h.curvature_radius(dx * (best_j + 1));
  const double refined = std::min(best, parabolic_extremum(f0, best, f2));
  if (!(refined > 0)) {
    throw NonSmoothBoundary(
        "radius of curvature is not strictly positive at theta = " +
            std::to_string(dx * best_j),
        dx * best_j);
  }
  return refined;
}

double farthest_point_modulus(const SupportFn& h) {
  const int grid = dense_grid_size(h.fourier_degree());
  double best = -1;
  int best_j = 0;
  for (int j = 0; j < grid; ++j) {
    const double v = std::abs(h.boundary_point(kTwoPi * j / grid));
    if (v > best) {
      best = v;
      best_j = j;
    }
  }
  const double dx = kTwoPi / grid;
  const double f0 = std::abs(h.boundary_point(dx * (best_j - 1)));
  const double f2 = std::abs(h.boundary_point(dx * (best_j + 1)));
  return std::max(best, parabolic_extremum(f0, best, f2));
}

bool contains(const SupportFn& outer, const SupportFn& inner, const Tolerances& tol) {
  tol.validate();
  const int grid =
      dense_grid_size(std::max(outer.fourier_degree(), inner.fourier_degree()));
  for (int j = 0; j < grid; ++j) {
    const double theta = kTwoPi * j / grid;
    if (inner.h(theta) > outer.h(theta) + tol.quad_tol) return false;
  }
  return true;
}

namespace {

struct Disc {
  Complex c;
  double r2;  // squared radius
};

bool disc_contains(const Disc& d, Complex p) {
  return std::norm(p - d.c) <= d.r2 * (1 + 4e-15) + 4e-300;
}

Disc disc_from_2(Complex a, Complex b) {
  const Complex c = 0.5 * (a + b);
  return {c, std::norm(a - c)};
}

Disc disc_from_3(Complex a, Complex b, Complex c) {
  // Circumcircle via perpendicular bisectors, in coordinates translated to a:
  // absolute coordinates cancel catastrophically when the triple is a tight
  // cluster far from the origin. Falls back to the best pairwise disc for
  // (near-)collinear triples.
  const Complex u = b - a;
  const Complex v = c - a;
  const double d = 2.0 * (u.real() * v.imag() - u.imag() * v.real());
  const double scale2 = std::max({std::norm(u), std::norm(v), std::norm(b - c)});
  if (std::abs(d) <= 1e-14 * scale2) {
    Disc best = disc_from_2(a, b);
    for (const Disc cand : {disc_from_2(b, c), disc_from_2(a, c)}) {
      if (cand.r2 > best.r2) best = cand;
    }
    return best;
  }
  const double nu = std::norm(u);
  const double nv = std::norm(v);
  const Complex center =
      a + Complex(v.imag() * nu - u.imag() * nv, u.real() * nv - v.real() * nu) / d;
  const double r2 = std::max({std::norm(a - center), std::norm(b - center),
                              std::norm(c - center)});
  return {center, r2};
}

/// Welzl's move-to-front algorithm; exact up to floating point for any number
/// of points, with at most 3 support points on the final disc.
Disc welzl(std::vector<Complex>& pts, size_t limit, std::vector<Complex>& boundary) {
  Disc d{Complex(0, 0), -1};
  switch (boundary.size()) {
    case 1:
      d = {boundary[0], 0};
      break;
    case 2:
      d = disc_from_2(boundary[0], boundary[1]);
      break;
    case 3:
      return disc_from_3(boundary[0], boundary[1], boundary[2]);
    default:
      break;
  }
  for (size_t i = 0; i < limit; ++i) {
    if (d.r2 >= 0 && disc_contains(d, pts[i])) continue;
    boundary.push_back(pts[i]);
    d = welzl(pts, i, boundary);
    boundary.pop_back();
    // Move-to-front keeps the expected recursion depth low.
    const Complex p = pts[i];
    pts.erase(pts.begin() + static_cast<long>(i));
    pts.insert(pts.begin(), p);
  }
  if (d.r2 < 0) d = {Complex(0, 0), 0};
  return d;
}

}  // namespace

std::pair<Complex, double> chebyshev_disc(std::span<const Complex> points) {
  if (points.empty()) throw InputError("Chebyshev disc of an empty point set");
  for (Complex p : points) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
      throw InputError("Chebyshev disc input must be finite");
    }
  }
  std::vector<Complex> pts(points.begin(), points.end());
  // Deterministic shuffle: Welzl's expected-linear bound needs random order,
  // and reports must not depend on run-to-run state.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  for (size_t i = pts.size(); i > 1; --i) {
    std::swap(pts[i - 1], pts[rng() % i]);
  }
  std::vector<Complex> boundary;
  const Disc d = welzl(pts, pts.size(), boundary);
  return {d.c, std::sqrt(std::max(d.r2, 0.0))};
}

double chebyshev_radius(std::span<const Complex> points) {
  return chebyshev_disc(points).second;
}

void write_boundary_csv(std::ostream& os, const BoundaryMesh& mesh) {
  os << "theta,re,im,weight,rho\n";
  char buf[160];
  for (int k = 0; k < mesh.node_count(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  mesh.thetas[k], mesh.points[k].real(), mesh.points[k].imag(),
                  mesh.arclength_weights[k], mesh.curvature_radii[k]);
    os << buf;
  }
}

}  // namespace spectralset
