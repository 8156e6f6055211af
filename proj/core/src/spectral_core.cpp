#include "spectralset/spectral_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cstdint>
#include <cstdio>

namespace spectralset {

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw InputError("operator must be a square matrix with n >= 1");
  }
  if (!entries_.allFinite()) {
    throw InputError("operator entries must be finite");
  }
}

bool Operator::is_scalar_multiple_of_identity(double tol) const {
  const Complex c = entries_.trace() / static_cast<double>(dim());
  const Matrix d = entries_ - c * Matrix::Identity(dim(), dim());
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  return d.cwiseAbs().maxCoeff() <= tol * scale;
}

std::string Operator::hash() const {
  // FNV-1a over the little-endian bytes of (n, re, im) in row-major order.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const std::uint64_t n = static_cast<std::uint64_t>(dim());
  mix(&n, sizeof n);
  for (int i = 0; i < dim(); ++i) {
    for (int j = 0; j < dim(); ++j) {
      const double re = entries_(i, j).real(), im = entries_(i, j).imag();
      mix(&re, sizeof re);
      mix(&im, sizeof im);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double operator_norm(const Matrix& a) {
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double operator_norm(const Operator& a) { return operator_norm(a.matrix()); }

HermitianExtremes hermitian_extremes(const Matrix& h, const Tolerances& tol) {
  tol.validate();
  const double scale = operator_norm(h);
  const double dev = operator_norm(Matrix(h - h.adjoint()));
  if (dev > tol.eig_tol * std::max(scale, 1e-300)) {
    throw ContractError("matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("Hermitian eigensolve failed to converge");
  }
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

HermitianExtremes hermitian_extremes(const Operator& h, const Tolerances& tol) {
  return hermitian_extremes(h.matrix(), tol);
}

Matrix resolvent(const Matrix& a, Complex sigma, const Tolerances& tol) {
  tol.validate();
  const int n = static_cast<int>(a.rows());
  const Matrix m = sigma * Matrix::Identity(n, n) - a;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n - 1);
  if (!(smin > 0) || smax / smin > tol.cond_cap) {
    throw SingularityError("resolvent evaluation point is numerically on the spectrum",
                           sigma);
  }
  const Matrix r = svd.solve(Matrix::Identity(n, n));
  const double residual = operator_norm(Matrix(m * r - Matrix::Identity(n, n)));
  if (residual > std::max(tol.eig_tol, 1e-13 * smax / smin)) {
    throw SingularityError("resolvent residual exceeds tolerance", sigma);
  }
  return r;
}

Operator resolvent(const Operator& a, Complex sigma, const Tolerances& tol) {
  return Operator(resolvent(a.matrix(), sigma, tol));
}

double min_resolvent_modulus(const Operator& a, Complex sigma,
                             const Tolerances& tol) {
  tol.validate();
  const int n = a.dim();
  const Matrix m = sigma * Matrix::Identity(n, n) - a.matrix();
  const double norm = operator_norm(m);
  if (!(norm > 0)) {
    throw SingularityError("sigma*I - A vanishes", sigma);
  }
  return 1.0 / (norm * norm);
}

std::vector<GershgorinDisc> gershgorin_discs(const Operator& a) {
  const int n = a.dim();
  std::vector<GershgorinDisc> discs(n);
  for (int i = 0; i < n; ++i) {
    double r = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) r += std::abs(a.matrix()(i, j));
    }
    discs[i] = {a.matrix()(i, i), r};
  }
  return discs;
}

double gershgorin_enclosure_radius(const Operator& a, Complex center) {
  double r = 0;
  for (const auto& d : gershgorin_discs(a)) {
    r = std::max(r, std::abs(d.center - center) + d.radius);
  }
  return r;
}

std::vector<Complex> spectrum(const Operator& a) {
  Eigen::ComplexEigenSolver<Matrix> es(a.matrix(), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("nonsymmetric eigensolve failed to converge");
  }
  std::vector<Complex> ev(a.dim());
  for (int i = 0; i < a.dim(); ++i) ev[i] = es.eigenvalues()(i);
  return ev;
}

}  // namespace spectralset
