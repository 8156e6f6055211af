#include <benchmark/benchmark.h>

#include <random>

#include "spectralset/bounds.hpp"
#include "spectralset/search.hpp"

using namespace spectralset;

namespace {

Operator seeded(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return Operator(std::move(m));
}

SupportFn covering_disk(const Operator& a) {
  const Complex c = a.matrix().trace() / static_cast<double>(a.dim());
  return SupportFn::disk(c, 1.5 * gershgorin_enclosure_radius(a, c) + 0.5);
}

void bm_numrange_support(benchmark::State& state) {
  const Operator a = seeded(static_cast<int>(state.range(0)), 1);
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numrange_support(a, theta));
    theta += 0.01;
  }
}
BENCHMARK(bm_numrange_support)->Arg(3)->Arg(6)->Arg(12);

void bm_numrange_body(benchmark::State& state) {
  const Operator a = seeded(4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(numrange_body(a, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_numrange_body)->Arg(256)->Arg(512);

void bm_qrange_support(benchmark::State& state) {
  const Operator a = seeded(static_cast<int>(state.range(0)), 3);
  const QParameter q(Complex(0.6, 0));
  const AscentOptions opts{8, 0, 400};
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrange_support(a, q, theta, opts));
    theta += 0.01;
  }
}
BENCHMARK(bm_qrange_support)->Arg(3)->Arg(6);

void bm_boundary_mesh(benchmark::State& state) {
  const SupportFn d = SupportFn::disk(Complex(0.2, 0.1), 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary_mesh(d, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_boundary_mesh)->Arg(512)->Arg(2048);

void bm_potential_profile(benchmark::State& state) {
  const Operator a = seeded(static_cast<int>(state.range(0)), 4);
  const BoundaryMesh mesh = boundary_mesh(covering_disk(a), 512);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        potential_profile(a, mesh, {}, ProfileOptions{.allow_refinement = false}));
  }
}
BENCHMARK(bm_potential_profile)->Arg(3)->Arg(6);

void bm_ratio_maximization(benchmark::State& state) {
  const Operator a = seeded(3, 5);
  const BoundaryMesh mesh = boundary_mesh(covering_disk(a), 256);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        maximize_ratio(a, mesh, static_cast<int>(state.range(0)), 4, 0));
  }
}
BENCHMARK(bm_ratio_maximization)->Arg(2)->Arg(4);

void bm_assemble_report(benchmark::State& state) {
  const Operator a = seeded(3, 6);
  PipelineParams params;
  params.grid_n = 256;
  params.fourier_k = 32;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        assemble_report(a, OmegaSpec::numerical_range(), params));
  }
}
BENCHMARK(bm_assemble_report);

}  // namespace

BENCHMARK_MAIN();
