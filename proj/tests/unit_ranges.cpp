#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "spectralset/ranges.hpp"

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

}  // namespace

TEST_CASE("numerical range support of normal and nilpotent matrices") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = -1;
  const Operator normal(std::move(d));
  for (int j = 0; j < 16; ++j) {
    const double theta = kTwoPi * j / 16 + 0.01;
    const double expected =
        std::max((std::polar(1.0, -theta) * Complex(2, 0)).real(),
                 (std::polar(1.0, -theta) * Complex(-1, 0)).real());
    CHECK(numrange_support(normal, theta) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  const Operator a = nilpotent2();
  for (int j = 0; j < 32; ++j) {
    CHECK(numrange_support(a, kTwoPi * j / 32) ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("numrange_body fits the disk and rejects flat boundaries") {
  const SupportFn w = numrange_body(nilpotent2());
  CHECK(w.a0() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(w.cos_coeffs().cwiseAbs().maxCoeff() < 1e-9);
  CHECK(w.sin_coeffs().cwiseAbs().maxCoeff() < 1e-9);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  CHECK_THROWS_AS((void)numrange_body(Operator(std::move(d))),
                  const NonSmoothBoundary&);
}

TEST_CASE("q parameter validation and fattening rate") {
  CHECK_THROWS_AS(QParameter(Complex(0, 0)), const InputError&);
  CHECK_THROWS_AS(QParameter(Complex(1.2, 0)), const InputError&);
  CHECK(QParameter(Complex(1, 0)).t() == 0.0);
  CHECK(QParameter(Complex(0.6, 0)).t() ==
        doctest::Approx(0.8 / 0.6).epsilon(1e-15));
  CHECK(QParameter(Complex(0, 0.6)).abs() == doctest::Approx(0.6));
}

TEST_CASE("maximizer sets cluster the top eigenspace") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 1;
  const Operator a(std::move(d));
  CHECK(maximizer_set(a, 0.0).multiplicity() == 1);
  CHECK(maximizer_set(a, 0.0).eigenvalue == doctest::Approx(3.0));
  CHECK(maximizer_set(a, 0.0, 2.5).multiplicity() == 3);
}

TEST_CASE("non-normality profile") {
  for (int j = 0; j < 8; ++j) {
    CHECK(m_theta(nilpotent2(), kTwoPi * j / 8) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  const Operator scal(Matrix(Complex(0.5, 0.5) * Matrix::Identity(3, 3)));
  CHECK(m_theta(scal, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("qrange support reduces to the numerical range at |q| = 1") {
  const Operator a = seeded(3, 31);
  const QParameter one(Complex(1, 0));
  for (int j = 0; j < 8; ++j) {
    const double theta = kTwoPi * j / 8;
    CHECK(qrange_support(a, one, theta) ==
          doctest::Approx(numrange_support(a, theta)).epsilon(1e-12));
  }
}

TEST_CASE("qrange support dominates the numerical range support") {
  const Operator a = seeded(3, 37);
  const QParameter q(Complex(0.7, 0));
  for (int j = 0; j < 8; ++j) {
    const double theta = kTwoPi * j / 8 + 0.02;
    CHECK(qrange_support(a, q, theta) >= numrange_support(a, theta) - 1e-10);
  }
}

TEST_CASE("qrange body of the nilpotent is the 3-disk; scalars are rejected") {
  const SupportFn body = qrange_body(nilpotent2(), QParameter(Complex(0.6, 0)));
  CHECK(body.a0() == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(body.cos_coeffs().cwiseAbs().maxCoeff() < 1e-7);
  CHECK(body.sin_coeffs().cwiseAbs().maxCoeff() < 1e-7);

  const Operator scal(Matrix(Complex(0.5, 0) * Matrix::Identity(2, 2)));
  CHECK_THROWS_AS((void)qrange_body(scal, QParameter(Complex(0.6, 0))),
                  const InputError&);

  // |q| = 1 collapses the body to W(A); the fit demands |q| < 1 strictly.
  CHECK_THROWS_AS((void)qrange_body(nilpotent2(), QParameter(Complex(1, 0))),
                  const InputError&);
}

TEST_CASE("perimeter derivative check is self-consistent") {
  const Operator a = seeded(3, 41);
  const auto check = perimeter_derivative_check(a);
  CHECK(check.integral_m > 0);
  CHECK(std::abs(check.integral_m - check.perimeter_slope) <=
        5e-2 * check.integral_m);
}
