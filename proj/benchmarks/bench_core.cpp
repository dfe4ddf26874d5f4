#include <benchmark/benchmark.h>

#include "seedscale/diffusion.hpp"
#include "seedscale/expm.hpp"
#include "seedscale/path.hpp"
#include "seedscale/seedbank.hpp"

using namespace seedscale;

static void BM_ExpmConservative(benchmark::State& state) {
  RateMatrix q = blockcounting_q({0.1, 1.0, {}}, {3, 2});
  const double t = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm_conservative(q, t));
  }
}
BENCHMARK(BM_ExpmConservative)->Arg(1)->Arg(10)->Arg(100);

static void BM_ExpmGeneral(benchmark::State& state) {
  GeneralMatrix g = ancient_g({3, 2}, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm_general(g, 1.0));
  }
}
BENCHMARK(BM_ExpmGeneral);

static void BM_MatrixPower(benchmark::State& state) {
  PrelimitDecomposition dec = prelimit_decomposition(0.05, 1.0, {3, 2});
  GeneralMatrix a = dec.a_kappa.to_general();
  for (auto _ : state) {
    benchmark::DoNotOptimize(matrix_power(a, 10000));
  }
}
BENCHMARK(BM_MatrixPower);

static void BM_SamplePath(benchmark::State& state) {
  RateMatrix q = blockcounting_q({0.1, 1.0, {}}, {3, 2});
  std::uint64_t replicate = 0;
  for (auto _ : state) {
    RngStream rng(1, replicate++);
    benchmark::DoNotOptimize(sample_path(q, {3, 2}, 10.0, rng));
  }
}
BENCHMARK(BM_SamplePath);

static void BM_EmTrajectory(benchmark::State& state) {
  EmConfig config;
  config.h = 1e-3;
  config.horizon = 1.0;
  config.output_grid = {1.0};
  std::uint64_t replicate = 0;
  for (auto _ : state) {
    RngStream rng(2, replicate++);
    benchmark::DoNotOptimize(
        simulate_seedbank({0.5, 0.5}, 1.0, 1.0, config, rng));
  }
}
BENCHMARK(BM_EmTrajectory);

static void BM_LimitJumpSampler(benchmark::State& state) {
  std::uint64_t replicate = 0;
  for (auto _ : state) {
    RngStream rng(3, replicate++);
    benchmark::DoNotOptimize(sample_limit_jump({0, 0.7}, 1.0, 10.0, rng));
  }
}
BENCHMARK(BM_LimitJumpSampler);

BENCHMARK_MAIN();
