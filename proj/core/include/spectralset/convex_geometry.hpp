#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "spectralset/types.hpp"

namespace spectralset {

/// Support function of a compact convex planar body, stored as a truncated
/// Fourier series
///   h(theta) = a0 + sum_{k=1..K} (a_k cos(k theta) + b_k sin(k theta)).
/// Convexity with C^2 boundary corresponds to h + h'' >= 0; the radius of
/// curvature of the boundary point with outward normal e^{i theta} is
/// rho(theta) = h(theta) + h''(theta).
class SupportFn {
 public:
  SupportFn(double a0, RealVector a, RealVector b, double fit_residual = 0);

  /// Disc of radius r centered at c: h(theta) = r + Re(conj(e^{i theta}) c).
  static SupportFn disk(Complex center, double radius);

  int fourier_degree() const { return static_cast<int>(a_.size()); }
  double a0() const { return a0_; }
  const RealVector& cos_coeffs() const { return a_; }
  const RealVector& sin_coeffs() const { return b_; }
  /// Max residual of the least-squares fit that produced this body (0 for
  /// exact constructions).
  double fit_residual() const { return fit_residual_; }

  double h(double theta) const;
  double dh(double theta) const;
  double d2h(double theta) const;
  double curvature_radius(double theta) const { return h(theta) + d2h(theta); }

  /// Boundary point with outward normal e^{i theta}:
  /// sigma(theta) = h e^{i theta} + h' i e^{i theta}.
  Complex boundary_point(double theta) const;

  /// Minkowski sum with a disc of radius eps (adds eps to a0). Optional
  /// regularization for marginally convex data; never applied implicitly.
  SupportFn minkowski_smoothed(double eps) const;

 private:
  double a0_;
  RealVector a_, b_;
  double fit_residual_;
};

/// Uniform-in-normal-angle discretization of the boundary of a convex body.
/// Node k sits at theta_k = 2 pi k / N with arclength weight
/// w_k = rho(theta_k) * 2 pi / N (trapezoidal rule in theta, ds = rho dtheta).
struct BoundaryMesh {
  SupportFn support;
  std::vector<double> thetas;
  std::vector<Complex> points;           // sigma_k
  std::vector<Complex> outward_normals;  // e^{i theta_k}
  std::vector<Complex> unit_tangents;    // i e^{i theta_k}
  std::vector<double> arclength_weights; // w_k > 0
  std::vector<double> curvature_radii;   // rho(theta_k)

  int node_count() const { return static_cast<int>(thetas.size()); }
  double total_weight() const;
  /// Mean arclength spacing L / N.
  double spacing() const;
};

/// Least-squares trigonometric fit of support samples (theta_j, h_j) up to
/// Fourier degree K. Requires at least 2K+1 samples at distinct angles.
/// Throws NonSmoothBoundary if the fitted h + h'' dips below -curvature_tol
/// anywhere on a dense grid.
SupportFn fit_support(std::span<const double> thetas,
                      std::span<const double> values, int degree,
                      const Tolerances& tol = {});

/// Sample the boundary at n_nodes uniform normal angles (n_nodes >= 16).
/// Requires strict convexity: rho(theta_k) > 0 at every node.
BoundaryMesh boundary_mesh(const SupportFn& h, int n_nodes,
                           const Tolerances& tol = {});

/// Perimeter |dOmega| = integral of rho = 2 pi a0.
double perimeter(const SupportFn& h);

/// min_theta rho(theta) over a dense grid with local parabolic refinement.
/// Throws NonSmoothBoundary if the minimum is not strictly positive.
double min_radius_of_curvature(const SupportFn& h, const Tolerances& tol = {});

/// w(Omega) = max_theta |sigma(theta)|, dense grid + parabolic refinement.
double farthest_point_modulus(const SupportFn& h);

/// Inclusion test: inner subset of outer iff h_inner <= h_outer + quad_tol on
/// a dense grid.
bool contains(const SupportFn& outer, const SupportFn& inner,
              const Tolerances& tol = {});

/// Radius of the smallest disc enclosing the points (Chebyshev radius).
double chebyshev_radius(std::span<const Complex> points);
/// Smallest enclosing disc; returns {center, radius}.
std::pair<Complex, double> chebyshev_disc(std::span<const Complex> points);

/// CSV rows "theta,re,im,weight,rho" at 17 significant digits.
void write_boundary_csv(std::ostream& os, const BoundaryMesh& mesh);

}  // namespace spectralset
