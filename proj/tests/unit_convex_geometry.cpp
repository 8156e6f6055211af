#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "spectralset/convex_geometry.hpp"

using namespace spectralset;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("disk support function") {
  const Complex c(1.0, 0.5);
  const SupportFn d = SupportFn::disk(c, 2.0);
  CHECK(d.a0() == doctest::Approx(2.0));
  for (int j = 0; j < 8; ++j) {
    const double theta = kTwoPi * j / 8;
    CHECK(d.h(theta) ==
          doctest::Approx(2.0 + (c * std::polar(1.0, -theta)).real()).epsilon(1e-14));
    CHECK(d.curvature_radius(theta) == doctest::Approx(2.0).epsilon(1e-12));
    const Complex bp = d.boundary_point(theta);
    CHECK(std::abs(bp - c) == doctest::Approx(2.0).epsilon(1e-12));
    // Outward normal direction: bp - c is parallel to e^{i theta}.
    CHECK(std::abs(bp - c - 2.0 * std::polar(1.0, theta)) < 1e-12);
  }
  CHECK(perimeter(d) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(farthest_point_modulus(d) ==
        doctest::Approx(std::abs(c) + 2.0).epsilon(1e-10));
}

TEST_CASE("boundary point supports the body in its normal direction") {
  // Smooth non-circular body: rho = 2 - 0.3 sin(2 theta) > 0.
  std::vector<double> thetas, values;
  for (int j = 0; j < 64; ++j) {
    const double t = kTwoPi * j / 64;
    thetas.push_back(t);
    values.push_back(2.0 + 0.3 * std::cos(t) + 0.1 * std::sin(2 * t));
  }
  const SupportFn h = fit_support(thetas, values, 8);
  CHECK(h.a0() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(h.cos_coeffs()(0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(h.sin_coeffs()(1) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(h.fit_residual() < 1e-12);

  for (int j = 0; j < 16; ++j) {
    const double theta = kTwoPi * j / 16 + 0.05;
    const Complex n = std::polar(1.0, theta);
    // sigma(theta) attains the support value...
    CHECK((h.boundary_point(theta) * std::conj(n)).real() ==
          doctest::Approx(h.h(theta)).epsilon(1e-12));
    // ...and no boundary point exceeds it.
    for (int k = 0; k < 32; ++k) {
      const double other = kTwoPi * k / 32;
      CHECK((h.boundary_point(other) * std::conj(n)).real() <=
            h.h(theta) + 1e-10);
    }
  }
  CHECK(min_radius_of_curvature(h) == doctest::Approx(1.7).epsilon(1e-9));
}

TEST_CASE("fit_support rejects underdetermined input and corners") {
  std::vector<double> thetas, values;
  for (int j = 0; j < 8; ++j) {
    thetas.push_back(kTwoPi * j / 8);
    values.push_back(1.0);
  }
  CHECK_THROWS_AS((void)fit_support(thetas, values, 4), const InputError&);

  // Support of the segment [-1, 1]: h = |cos theta| has corner contributions;
  // the truncated fit oscillates to negative curvature near theta = pi/2.
  thetas.clear();
  values.clear();
  for (int j = 0; j < 256; ++j) {
    const double t = kTwoPi * j / 256;
    thetas.push_back(t);
    values.push_back(std::abs(std::cos(t)));
  }
  CHECK_THROWS_AS((void)fit_support(thetas, values, 16), const NonSmoothBoundary&);
}

TEST_CASE("boundary mesh weights implement the perimeter identity exactly") {
  const SupportFn d = SupportFn::disk(Complex(0.3, -0.7), 1.5);
  const BoundaryMesh mesh = boundary_mesh(d, 64);
  REQUIRE(mesh.node_count() == 64);
  for (int k = 0; k < 64; ++k) {
    CHECK(mesh.arclength_weights[k] ==
          doctest::Approx(1.5 * kTwoPi / 64).epsilon(1e-14));
    CHECK(std::abs(mesh.outward_normals[k] - std::polar(1.0, mesh.thetas[k])) <
          1e-14);
    CHECK(std::abs(mesh.unit_tangents[k] -
                   Complex(0, 1) * mesh.outward_normals[k]) < 1e-14);
  }
  CHECK(mesh.total_weight() == doctest::Approx(kTwoPi * d.a0()).epsilon(1e-13));
  CHECK(mesh.spacing() == doctest::Approx(mesh.total_weight() / 64));

  CHECK_THROWS_AS((void)boundary_mesh(d, 8), const InputError&);

  // Property: the trapezoid rule integrates rho = h + h'' exactly once the
  // node count clears twice the Fourier degree.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    RealVector a(6), b(6);
    for (int k = 0; k < 6; ++k) {
      a(k) = 0.02 * u(rng);
      b(k) = 0.02 * u(rng);
    }
    const SupportFn h(3.0, a, b);
    const BoundaryMesh m = boundary_mesh(h, 32);
    CHECK(std::abs(m.total_weight() - kTwoPi * 3.0) < 1e-10);
  }
}

TEST_CASE("containment is a support-function comparison") {
  CHECK(contains(SupportFn::disk(Complex(0, 0), 1.1), SupportFn::disk(Complex(0, 0), 1.0)));
  CHECK_FALSE(contains(SupportFn::disk(Complex(0, 0), 1.0),
                       SupportFn::disk(Complex(0, 0), 1.1)));
  CHECK(contains(SupportFn::disk(Complex(0.5, 0), 2.0),
                 SupportFn::disk(Complex(0, 0), 1.0)));
  CHECK_FALSE(contains(SupportFn::disk(Complex(2.5, 0), 1.0),
                       SupportFn::disk(Complex(0, 0), 1.0)));
}

TEST_CASE("smallest enclosing disc") {
  {
    const std::vector<Complex> pts = {Complex(1, 0), Complex(-1, 0), Complex(0, 1),
                                      Complex(0, -1)};
    const auto [center, radius] = chebyshev_disc(pts);
    CHECK(std::abs(center) < 1e-9);
    CHECK(radius == doctest::Approx(1.0).epsilon(1e-9));
  }
  {
    const std::vector<Complex> pts = {Complex(0, 0), Complex(2, 0)};
    const auto [center, radius] = chebyshev_disc(pts);
    CHECK(std::abs(center - Complex(1, 0)) < 1e-9);
    CHECK(radius == doctest::Approx(1.0).epsilon(1e-9));
  }
  {
    const std::vector<Complex> pts = {Complex(0.4, -0.2)};
    CHECK(chebyshev_radius(pts) == doctest::Approx(0.0));
  }
  const std::vector<Complex> empty;
  CHECK_THROWS_AS((void)chebyshev_disc(empty), const InputError&);
}

TEST_CASE("minkowski smoothing adds a disc") {
  const SupportFn d = SupportFn::disk(Complex(0.2, 0.1), 1.0);
  const SupportFn s = d.minkowski_smoothed(0.25);
  for (int j = 0; j < 12; ++j) {
    const double theta = kTwoPi * j / 12;
    CHECK(s.h(theta) == doctest::Approx(d.h(theta) + 0.25).epsilon(1e-14));
  }
}

TEST_CASE("boundary csv shape") {
  const BoundaryMesh mesh = boundary_mesh(SupportFn::disk(Complex(0, 0), 1.0), 16);
  std::ostringstream os;
  write_boundary_csv(os, mesh);
  std::istringstream in(os.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "theta,re,im,weight,rho");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(rows == 16);
}
