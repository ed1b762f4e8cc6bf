#include <benchmark/benchmark.h>

#include "twave/data.hpp"
#include "twave/dyadic.hpp"
#include "twave/nonlinear.hpp"
#include "twave/propagator.hpp"
#include "twave/resonance.hpp"

using namespace twave;

namespace {

const WaveSpeeds c22 = WaveSpeeds::make(2.0, 2.0);

SimConfig bench_config(int n) {
  SimConfig c;
  c.grid = Grid::cube(n, 2.0 * n);
  c.compute_z = false;
  c.eps0 = 0.01;
  c.normalization = DataNormalization::amplitude;
  return c;
}

}  // namespace

static void BM_ProfileRhs(benchmark::State& state) {
  const SimConfig c = bench_config(static_cast<int>(state.range(0)));
  const ProfileSolver solver(c);
  const ProfileState s = initial_state(c);
  for (auto _ : state) benchmark::DoNotOptimize(solver.rhs(s));
  state.SetItemsProcessed(state.iterations() * c.grid.size());
}
BENCHMARK(BM_ProfileRhs)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Rk4Step(benchmark::State& state) {
  const SimConfig c = bench_config(static_cast<int>(state.range(0)));
  const ProfileSolver solver(c);
  ProfileState s = initial_state(c);
  for (auto _ : state) s = solver.step(s, 0.05);
}
BENCHMARK(BM_Rk4Step)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_ZNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpectralField f = random_envelope_field(Grid::cube(n, 2.0 * n), 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(z_norm(f));
}
BENCHMARK(BM_ZNorm)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_FreeEvolution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SpectralField f = to_spectral(gaussian_bump(Grid::cube(n, 2.0 * n), 2.0));
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sup_norm(to_physical(evolve_free(f, t, Wave::second, Sign::plus, c22))));
    t += 1.0;
  }
}
BENCHMARK(BM_FreeEvolution)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_ResonanceSample(benchmark::State& state) {
  ResonanceOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        resonance_sample(Wave::second, {Sign::plus, Sign::minus}, c22, 0, 0, 0, static_cast<int>(state.range(0)), opts));
    ++opts.seed;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ResonanceSample)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_VolumeEstimate(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        volume_support_estimate(0, -1, 0, -6, {Sign::plus, Sign::minus}, {1, 0, 0}, c22, state.range(0), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_VolumeEstimate)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_LowerBoundSampling(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lower_bound_check(Wave::first, {Sign::plus, Sign::plus}, c22, 0, 0, 0, static_cast<int>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LowerBoundSampling)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
