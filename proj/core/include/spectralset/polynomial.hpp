#pragma once

#include <cmath>
#include <vector>

#include "spectralset/types.hpp"

namespace spectralset {

/// Polynomial with complex coefficients, ascending order. Trailing exact-zero
/// coefficients are trimmed so the leading coefficient is nonzero unless the
/// polynomial is a constant.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coefficients)
      : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw InputError("polynomial needs at least one coefficient");
    for (Complex c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw InputError("polynomial coefficients must be finite");
      }
    }
    while (coeffs_.size() > 1 && coeffs_.back() == Complex(0, 0)) coeffs_.pop_back();
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Complex(0, 0); }

  Complex eval(Complex z) const {
    Complex v = coeffs_.back();
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) v = v * z + *it;
    return v;
  }

  Matrix eval(const Matrix& a) const {
    const auto n = a.rows();
    Matrix v = coeffs_.back() * Matrix::Identity(n, n);
    for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
      v = v * a + *it * Matrix::Identity(n, n);
    }
    return v;
  }

  Polynomial scaled(Complex factor) const {
    std::vector<Complex> c(coeffs_);
    for (Complex& ck : c) ck *= factor;
    return Polynomial(std::move(c));
  }

 private:
  std::vector<Complex> coeffs_;
};

}  // namespace spectralset
