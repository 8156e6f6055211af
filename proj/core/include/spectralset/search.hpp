#pragma once

#include <cstdint>
#include <mutex>
#include <string>

#include "spectralset/polynomial.hpp"
#include "spectralset/potential.hpp"
#include "spectralset/ranges.hpp"

namespace spectralset {

/// Outcome of a ratio maximization run. `ratio` is an empirical lower bound
/// on the spectral constant of the body for A.
struct RatioResult {
  double ratio = 0;
  Polynomial polynomial = Polynomial({Complex(1, 0)});
  std::string matrix_hash;
  std::string omega;
  int restarts_used = 0;
  bool converged = false;
};

/// operator_norm(p(A)) / sup_{boundary} |p|. The boundary sup is the mesh
/// node maximum with one parabolic refinement at the argmax node (maximum
/// principle: the sup over the body is attained on the boundary). Requires
/// the spectrum of A strictly inside the body and a nonzero polynomial.
double ratio(const Operator& a, const Polynomial& p, const BoundaryMesh& mesh,
             const Tolerances& tol = {});

/// Derivative-free simplex ascent over degree-`degree` coefficient space
/// (real and imaginary parts), with unit-sup normalization on the mesh after
/// every step. Restart 0 is the warm start p = z - steiner_point; the others
/// jitter it locally with seeded Gaussian noise, so the result explores the
/// warm start's basin and is never below the warm start's ratio. Deterministic
/// given the seed; per-restart convergence threshold 1e-9 on the simplex
/// f-spread.
RatioResult maximize_ratio(const Operator& a, const BoundaryMesh& mesh,
                           int degree, int restarts, std::uint64_t seed,
                           const Tolerances& tol = {});

/// Append-only JSONL sink for conjecture findings; appends are serialized
/// through one mutex so parallel trials never interleave bytes.
class FindingsLog {
 public:
  explicit FindingsLog(std::string path) : path_(std::move(path)) {}

  void append_line(const std::string& json_line);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mutex_;
};

struct TrialParams {
  int degree = 4;
  int restarts = 32;
  std::uint64_t seed = 0;
  int grid_n = 512;
  int fourier_k = 64;
  int ascent_restarts = 8;  // support-function ascent inside qrange_body
  // Explicit Minkowski smoothing (h <- h + eps), default off. Near-polygonal
  // bodies make the truncated support fit ring below zero curvature; opting
  // in trades an eps-fattened domain (ratios shrink, never grow) for a trial
  // that completes instead of failing loudly.
  double smooth_eps = 0;
  Tolerances tol;
};

/// One conjecture stress test: max ratio over Omega_q versus the conjectured
/// constant. `finding_json` is a single JSONL record with full reproduction
/// metadata (matrix entries, q, best coefficients, both sides, seed); when a
/// log is supplied the record is appended immediately.
struct TrialResult {
  double max_ratio = 0;
  double bound = 0;
  bool violation = false;
  RatioResult best;
  std::string finding_json;
};

TrialResult conjecture_trial(const Operator& a, const QParameter& q,
                             const TrialParams& params = {},
                             FindingsLog* log = nullptr);

enum class EnsembleKind { ginibre, jordan, nilpotent_shift, perturbed_normal };

struct EnsembleOptions {
  double jordan_offdiag = 2.0;
  double perturbation_eps = 1e-2;  // operator-norm size of the perturbation
};

/// Deterministic matrix per (kind, n, seed): ginibre has i.i.d. complex
/// Gaussian entries scaled by 1/sqrt(n); jordan is a single Jordan block with
/// the configured off-diagonal; nilpotent_shift is the unit shift;
/// perturbed_normal is U diag(g_i) U* plus a perturbation of operator norm
/// exactly perturbation_eps.
Operator make_ensemble(EnsembleKind kind, int n, std::uint64_t seed,
                       const EnsembleOptions& opts = {});

}  // namespace spectralset
