#pragma once

#include <cstdint>
#include <span>

#include "spectralset/convex_geometry.hpp"
#include "spectralset/spectral_core.hpp"

namespace spectralset {

/// Parameter of the scaled q-numerical range Omega_q = W_q(A)/q. Only |q|
/// matters: Omega_q = Omega_{|q|}. Requires 0 < |q| <= 1.
class QParameter {
 public:
  explicit QParameter(Complex q);

  Complex value() const { return q_; }
  double abs() const { return abs_; }
  /// Fattening rate t = sqrt(1 - |q|^2) / |q|; t = 0 iff |q| = 1.
  double t() const { return t_; }

 private:
  Complex q_;
  double abs_;
  double t_;
};

/// Top eigenspace of Re(e^{-i theta} A): all eigenvalues within eps of the
/// maximum (eigenvalues closer than an internal gap tolerance are clustered).
struct MaximizerSet {
  double theta = 0;
  double eigenvalue = 0;
  Matrix basis;  // n x d, orthonormal columns
  int multiplicity() const { return static_cast<int>(basis.cols()); }
};

/// Controls for the multi-start projected ascent used on sphere objectives.
struct AscentOptions {
  int restarts = 32;
  std::uint64_t seed = 0;
  int max_iterations = 400;
};

/// h_{W(A)}(e^{i theta}) = lambda_max((e^{-i theta} A + e^{i theta} A^*)/2).
double numrange_support(const Operator& a, double theta);

/// Fourier fit of the numerical range boundary from n_samples uniform support
/// samples. Throws NonSmoothBoundary when W(A) has flat boundary pieces
/// (normal matrices).
SupportFn numrange_body(const Operator& a, int n_samples = 512, int degree = 64,
                        const Tolerances& tol = {});

MaximizerSet maximizer_set(const Operator& a, double theta, double eps = 0.0,
                           const Tolerances& tol = {});

/// m(theta) = sup { sqrt(||Ax||^2 - |<Ax,x>|^2) : unit x in the top eigenspace
/// of Re(e^{-i theta} A) }. Closed form for simple top eigenvalues; projected
/// ascent over the eigenspace otherwise. Zero for scalar multiples of I.
double m_theta(const Operator& a, double theta, const Tolerances& tol = {},
               const AscentOptions& opts = {});

/// Support function of Omega_{|q|}:
///   sup_{||x||=1} Re<e^{-i theta} A x, x> + t * ||P_{x perp}(e^{-i theta} A x)||.
/// Multi-start projected gradient ascent with an eigenvector warm start; the
/// result is a certified lower bound of the true sup and is never below
/// numrange_support(a, theta). `warm_starts` seeds extra ascent starts; the
/// best unit vector found is written to `maximizer` when non-null.
double qrange_support(const Operator& a, const QParameter& q, double theta,
                      const AscentOptions& opts = {},
                      std::span<const Vector> warm_starts = {},
                      Vector* maximizer = nullptr);

/// Fitted boundary of Omega_{|q|}. Requires A != c*I. The fit must contain the
/// numerical range samples (internal consistency check).
SupportFn qrange_body(const Operator& a, const QParameter& q,
                      int n_samples = 512, int degree = 64,
                      const Tolerances& tol = {}, const AscentOptions& opts = {});

struct PerimeterDerivativeCheck {
  double integral_m = 0;      // trapezoid of m(theta) over [0, 2 pi)
  double perimeter_slope = 0; // (|dOmega(t_step)| - |dW(A)|) / t_step
};

/// Dual-route check of d/dt |dOmega(t)| at t = 0+, where Omega(t) is the
/// scaled q-range with t = sqrt(1-|q|^2)/|q|. Requires smooth W(A).
PerimeterDerivativeCheck perimeter_derivative_check(
    const Operator& a, double t_step = 1e-3, int n_theta = 256,
    const Tolerances& tol = {}, const AscentOptions& opts = {});

}  // namespace spectralset
