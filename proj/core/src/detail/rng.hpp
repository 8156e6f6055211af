#pragma once

#include <cstdint>
#include <random>

#include "spectralset/types.hpp"

namespace spectralset::detail {

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
/// Hand-rolled so streams are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard real Gaussian via Box-Muller (deterministic given the engine state).
inline double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 == 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

/// Complex Gaussian with E|z|^2 = 1 (real and imaginary parts N(0, 1/2)).
inline Complex complex_gaussian(std::mt19937_64& rng) {
  const double s = 0.7071067811865475244;  // 1/sqrt(2)
  const double re = gaussian(rng);
  const double im = gaussian(rng);
  return Complex(s * re, s * im);
}

/// Random unit vector in C^n.
inline Vector random_unit_vector(std::mt19937_64& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_gaussian(rng);
  const double norm = v.norm();
  if (norm == 0) {
    v.setZero();
    v(0) = 1;
    return v;
  }
  return v / norm;
}

/// Splitmix-style seed derivation so sub-tasks get decorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace spectralset::detail
