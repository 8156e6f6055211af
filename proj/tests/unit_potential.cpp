#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "spectralset/potential.hpp"

using namespace spectralset;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Operator nilpotent2() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 2.0;
  return Operator(std::move(m));
}

Operator seeded(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return Operator(std::move(m));
}

SupportFn covering_disk(const Operator& a, double factor) {
  const Complex c = a.matrix().trace() / static_cast<double>(a.dim());
  return SupportFn::disk(c, factor * gershgorin_enclosure_radius(a, c) + 0.5);
}

}  // namespace

TEST_CASE("support distance and spectrum guard") {
  const SupportFn d = SupportFn::disk(Complex(0, 0), 1.0);
  CHECK(support_distance(d, Complex(0, 0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(support_distance(d, Complex(0.5, 0)) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(support_distance(d, Complex(2, 0)) < 0);

  CHECK_NOTHROW(require_spectrum_inside(nilpotent2(), d));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3;
  CHECK_THROWS_AS(require_spectrum_inside(Operator(std::move(m)), d),
                  const DomainError&);
}

TEST_CASE("scalar potential density matches the closed form") {
  Matrix m(1, 1);
  m(0, 0) = Complex(0.2, 0);
  const Operator a(std::move(m));
  const BoundaryMesh mesh = boundary_mesh(SupportFn::disk(Complex(0, 0), 1.0), 512);
  const PotentialProfile profile = potential_profile(a, mesh);

  for (int k = 0; k < profile.node_count(); k += 37) {
    const double theta = profile.mesh.thetas[k];
    const Complex e = std::polar(1.0, theta);
    const double expected = (e / (e - Complex(0.2, 0))).real() / std::numbers::pi;
    CHECK(profile.lambda_min[k] == doctest::Approx(expected).epsilon(1e-11));
    CHECK(profile.lambda_min[k] > 0);
  }
  CHECK(gamma1(profile) == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(m_total(profile) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("potential is hermitian and sums to twice the identity") {
  const Operator a = seeded(3, 51);
  const BoundaryMesh mesh = boundary_mesh(covering_disk(a, 1.5), 512);

  const Matrix one = mu_at(a, mesh.points[7], mesh.unit_tangents[7]);
  CHECK(operator_norm(Matrix(one - one.adjoint())) < 1e-12);

  const PotentialProfile profile =
      potential_profile(a, mesh, {}, ProfileOptions{.allow_refinement = false});
  Matrix sum = Matrix::Zero(3, 3);
  for (int k = 0; k < profile.node_count(); ++k) {
    sum += profile.mu[k] * profile.mesh.arclength_weights[k];
  }
  CHECK(operator_norm(Matrix(sum - 2.0 * Matrix::Identity(3, 3))) <= 1e-8);
}

TEST_CASE("potential profile rejects spectra outside the body") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3;
  const BoundaryMesh mesh = boundary_mesh(SupportFn::disk(Complex(0, 0), 1.0), 64);
  CHECK_THROWS_AS((void)potential_profile(Operator(std::move(m)), mesh),
                  const DomainError&);
}

TEST_CASE("cauchy calculus reproduces polynomials") {
  const Operator a = seeded(3, 57);
  const BoundaryMesh mesh = boundary_mesh(covering_disk(a, 1.5), 512);

  const BoundaryFunction one = BoundaryFunction::ones(mesh);
  CHECK(operator_norm(Matrix(cauchy_fcalc(a, mesh, one) -
                             Matrix::Identity(3, 3))) < 1e-10);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Complex> coeffs(6);
  for (auto& c : coeffs) c = Complex(g(rng), g(rng));
  const Polynomial p(coeffs);
  const BoundaryFunction f = BoundaryFunction::from_polynomial(p, mesh);
  const Matrix direct = p.eval(a.matrix());
  CHECK(operator_norm(Matrix(cauchy_fcalc(a, mesh, f) - direct)) <=
        1e-8 * operator_norm(direct));
}

TEST_CASE("cauchy transform of conj(z) vanishes on the nilpotent disk") {
  const Operator a = nilpotent2();
  const BoundaryMesh mesh = boundary_mesh(SupportFn::disk(Complex(0, 0), 1.0), 512);
  const Polynomial z({Complex(0, 0), Complex(1, 0)});
  const BoundaryFunction f = BoundaryFunction::from_polynomial(z, mesh);
  CHECK(operator_norm(cauchy_transform_op(a, mesh, f)) < 1e-10);

  // Scalar transform: conj(f) on the unit circle keeps only its constant
  // Fourier coefficient, so g == 1 for f == 1 and g == 0 for f == z.
  CHECK(std::abs(cauchy_transform_boundary(BoundaryFunction::ones(mesh), mesh,
                                           Complex(0.3, 0.2)) -
                 Complex(1, 0)) < 1e-10);
  CHECK(std::abs(cauchy_transform_boundary(f, mesh, Complex(0.3, 0.2))) < 1e-10);
  CHECK_THROWS_AS(
      (void)cauchy_transform_boundary(f, mesh, Complex(0.9999, 0)),
      const Error&);
}

TEST_CASE("gamma of the constant function is gamma1") {
  const Operator a = seeded(2, 61);
  const BoundaryMesh mesh = boundary_mesh(covering_disk(a, 1.5), 256);
  const PotentialProfile profile = potential_profile(a, mesh);
  const Complex g = gamma(profile, BoundaryFunction::ones(profile.mesh));
  CHECK(g.real() == doctest::Approx(gamma1(profile)).epsilon(1e-14));
  CHECK(std::abs(g.imag()) < 1e-10);
}

TEST_CASE("s operator equals A itself in the nilpotent equality case") {
  const Operator a = nilpotent2();
  const BoundaryMesh mesh = boundary_mesh(SupportFn::disk(Complex(0, 0), 1.0), 512);
  const Polynomial z({Complex(0, 0), Complex(1, 0)});
  const BoundaryFunction f = BoundaryFunction::from_polynomial(z, mesh);
  const Matrix s = s_operator(a, mesh, f);
  CHECK(operator_norm(Matrix(s - a.matrix())) < 1e-8);
  CHECK(operator_norm(s) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("boundary functions record their sup norm") {
  const BoundaryMesh mesh = boundary_mesh(SupportFn::disk(Complex(0, 0), 2.0), 64);
  const Polynomial z({Complex(0, 0), Complex(1, 0)});
  const BoundaryFunction f = BoundaryFunction::from_polynomial(z, mesh);
  CHECK(f.values.size() == 64);
  CHECK(f.sup_norm == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(BoundaryFunction::ones(mesh).sup_norm == doctest::Approx(1.0));
}
