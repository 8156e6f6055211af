#include "spectralset/potential.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "detail/parallel.hpp"

namespace spectralset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_alignment(const BoundaryMesh& mesh, const BoundaryFunction& f);

}  // namespace

double support_distance(const SupportFn& h, Complex z) {
  const int grid = std::max(2048, 16 * std::max(h.fourier_degree(), 1));
  double d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid; ++j) {
    const double theta = kTwoPi * j / grid;
    const double proj = z.real() * std::cos(theta) + z.imag() * std::sin(theta);
    d = std::min(d, h.h(theta) - proj);
  }
  return d;
}

void require_spectrum_inside(const Operator& a, const SupportFn& h) {
  // Cheap pass: every Gershgorin disc inside the body.
  bool quick = true;
  const auto discs = gershgorin_discs(a);
  for (const auto& disc : discs) {
    if (support_distance(h, disc.center) <= disc.radius) {
      quick = false;
      break;
    }
  }
  if (quick) return;
  // Gershgorin is an over-enclosure (for the nilpotent anchor it sticks far
  // outside W(A)), so fall back to exact eigenvalues before rejecting.
  for (const Complex ev : spectrum(a)) {
    const double d = support_distance(h, ev);
    if (!(d > 0)) {
      std::ostringstream msg;
      msg << "eigenvalue " << ev.real() << (ev.imag() < 0 ? "-" : "+")
          << std::abs(ev.imag()) << "i lies outside the body (Gershgorin discs"
          << " were inconclusive); boundary-to-eigenvalue distance " << d;
      throw DomainError(msg.str());
    }
  }
}

namespace {

void check_alignment(const BoundaryMesh& mesh, const BoundaryFunction& f) {
  if (static_cast<int>(f.values.size()) != mesh.node_count()) {
    throw InputError("boundary function and mesh node counts differ");
  }
}

}  // namespace

BoundaryFunction BoundaryFunction::from_polynomial(const Polynomial& p,
                                                   const BoundaryMesh& mesh) {
  BoundaryFunction f;
  f.values.resize(mesh.node_count());
  f.sup_norm = 0;
  for (int k = 0; k < mesh.node_count(); ++k) {
    f.values[k] = p.eval(mesh.points[k]);
    f.sup_norm = std::max(f.sup_norm, std::abs(f.values[k]));
  }
  return f;
}

BoundaryFunction BoundaryFunction::ones(const BoundaryMesh& mesh) {
  return from_polynomial(Polynomial({Complex(1, 0)}), mesh);
}

Matrix mu_at(const Operator& a, Complex sigma, Complex tangent,
             const Tolerances& tol) {
  const Matrix t = (tangent / Complex(0, kTwoPi)) * resolvent(a.matrix(), sigma, tol);
  return t + t.adjoint();
}

PotentialProfile potential_profile(const Operator& a, const BoundaryMesh& mesh,
                                   const Tolerances& tol,
                                   const ProfileOptions& opts) {
  tol.validate();
  require_spectrum_inside(a, mesh.support);

  const int n = a.dim();
  BoundaryMesh current = mesh;
  for (;;) {
    const int nodes = current.node_count();
    PotentialProfile profile{current, std::vector<Matrix>(nodes),
                             std::vector<double>(nodes)};
    detail::parallel_for(nodes, [&](int k) {
      const Matrix mu = mu_at(a, current.points[k], current.unit_tangents[k], tol);
      Eigen::SelfAdjointEigenSolver<Matrix> es(mu, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) {
        throw AccuracyError("potential eigensolve failed to converge");
      }
      profile.mu[k] = mu;
      profile.lambda_min[k] = es.eigenvalues()(0);
    });

    Matrix sum = Matrix::Zero(n, n);
    for (int k = 0; k < nodes; ++k) {
      sum += profile.mu[k] * current.arclength_weights[k];
    }
    const double defect = operator_norm(
        Matrix(sum - 2.0 * Matrix::Identity(n, n)));
    if (defect <= tol.quad_tol) return profile;
    if (!opts.allow_refinement || 2 * nodes > 4096) {
      std::ostringstream msg;
      msg << "partition identity defect " << defect << " exceeds tolerance "
          << tol.quad_tol << " at " << nodes
          << " nodes; the spectrum may be too close to the boundary";
      throw AccuracyError(msg.str());
    }
    current = boundary_mesh(current.support, 2 * nodes, tol);
  }
}

Complex gamma(const PotentialProfile& profile, const BoundaryFunction& f) {
  check_alignment(profile.mesh, f);
  Complex g(0, 0);
  for (int k = 0; k < profile.node_count(); ++k) {
    g -= profile.lambda_min[k] * f.values[k] * profile.mesh.arclength_weights[k];
  }
  return g;
}

double gamma1(const PotentialProfile& profile, const Tolerances& tol) {
  tol.validate();
  const Complex g = gamma(profile, BoundaryFunction::ones(profile.mesh));
  if (std::abs(g.imag()) > tol.quad_tol) {
    throw ConsistencyError("gamma(1) has nonreal part beyond tolerance");
  }
  return g.real();
}

double m_total(const PotentialProfile& profile) {
  double m = 0;
  for (int k = 0; k < profile.node_count(); ++k) {
    m += std::abs(profile.lambda_min[k]) * profile.mesh.arclength_weights[k];
  }
  return m;
}

namespace {

Matrix cauchy_sum(const Operator& a, const BoundaryMesh& mesh,
                  const BoundaryFunction& f, bool conjugate_f,
                  const Tolerances& tol) {
  check_alignment(mesh, f);
  const int n = a.dim();
  const int nodes = mesh.node_count();
  std::vector<Matrix> terms(nodes);
  try {
    detail::parallel_for(nodes, [&](int k) {
      const Complex fk = conjugate_f ? std::conj(f.values[k]) : f.values[k];
      const Complex c = fk * mesh.unit_tangents[k] * mesh.arclength_weights[k] /
                        Complex(0, kTwoPi);
      terms[k] = c * resolvent(a.matrix(), mesh.points[k], tol);
    });
  } catch (const SingularityError& e) {
    throw AccuracyError(std::string(e.what()) +
                        "; enlarge the body or refine the mesh");
  }
  Matrix sum = Matrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) sum += terms[k];
  return sum;
}

}  // namespace

Matrix cauchy_fcalc(const Operator& a, const BoundaryMesh& mesh,
                    const BoundaryFunction& f, const Tolerances& tol) {
  tol.validate();
  return cauchy_sum(a, mesh, f, /*conjugate_f=*/false, tol);
}

Matrix cauchy_transform_op(const Operator& a, const BoundaryMesh& mesh,
                           const BoundaryFunction& f, const Tolerances& tol) {
  tol.validate();
  return cauchy_sum(a, mesh, f, /*conjugate_f=*/true, tol);
}

Complex cauchy_transform_boundary(const BoundaryFunction& f,
                                  const BoundaryMesh& mesh, Complex z,
                                  const Tolerances& tol) {
  tol.validate();
  check_alignment(mesh, f);
  const double dist_tol = 2.0 * mesh.spacing();
  if (!(support_distance(mesh.support, z) > dist_tol)) {
    std::ostringstream msg;
    msg << "evaluation point (" << z.real() << ", " << z.imag()
        << ") is within two mesh spacings of the boundary; the trapezoidal "
           "Cauchy sum cannot certify accuracy there";
    throw AccuracyError(msg.str());
  }
  Complex g(0, 0);
  for (int k = 0; k < mesh.node_count(); ++k) {
    g += std::conj(f.values[k]) * mesh.unit_tangents[k] *
         mesh.arclength_weights[k] / (mesh.points[k] - z);
  }
  return g / Complex(0, kTwoPi);
}

Matrix s_operator(const Operator& a, const BoundaryMesh& mesh,
                  const BoundaryFunction& f, const Tolerances& tol) {
  tol.validate();
  check_alignment(mesh, f);
  if (f.sup_norm > 1.0 + tol.quad_tol) {
    throw InputError("s_operator requires sup-normalized f (sup_norm <= 1)");
  }
  // No refinement here: f is bound to this mesh, so the profile must be too.
  const PotentialProfile profile =
      potential_profile(a, mesh, tol, ProfileOptions{.allow_refinement = false});
  const Complex gamma_f = gamma(profile, f);
  const double g1 = gamma1(profile, tol);
  const Matrix fa = cauchy_fcalc(a, mesh, f, tol);
  const Matrix g = cauchy_transform_op(a, mesh, f, tol);
  const Matrix s = fa + g.adjoint() +
                   gamma_f * Matrix::Identity(a.dim(), a.dim());
  const double norm = operator_norm(s);
  if (norm > 2.0 + g1 + tol.psd_tol) {
    std::ostringstream msg;
    msg << "||S|| = " << norm << " exceeds 2 + gamma(1) = " << 2.0 + g1
        << " beyond tolerance; quadrature failure";
    throw ConsistencyError(msg.str());
  }
  return s;
}

void write_profile_csv(std::ostream& os, const PotentialProfile& profile) {
  os << "theta,lambda_min,weight\n";
  char buf[96];
  for (int k = 0; k < profile.node_count(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", profile.mesh.thetas[k],
                  profile.lambda_min[k], profile.mesh.arclength_weights[k]);
    os << buf;
  }
}

}  // namespace spectralset
