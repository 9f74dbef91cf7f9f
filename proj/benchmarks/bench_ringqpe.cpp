#include <benchmark/benchmark.h>

#include "ringqpe/abelian_ring.hpp"
#include "ringqpe/nonabelian.hpp"
#include "ringqpe/path_integral.hpp"
#include "ringqpe/qpe_pipeline.hpp"

using namespace ringqpe;

static void BM_Evolve(benchmark::State& state) {
  const RingConfig c = RingConfig{}.with_flux(0.7);
  const auto s = localized_state(static_cast<int>(state.range(0)));
  const double t = return_time(c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(s, c, t));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Evolve)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

// Direct synthesis: O(l G).
static void BM_DensityOnGrid(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const auto s = localized_state(l);
  const AngleGrid grid(4 * l + 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(density_on_grid(s, grid));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DensityOnGrid)->RangeMultiplier(2)->Range(16, 512)->Complexity();

static void BM_RingQpe(benchmark::State& state) {
  const RingConfig c = RingConfig{}.with_flux(0.7);
  const AngleGrid grid(1024);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ring_qpe(c, 100, grid));
  }
}
BENCHMARK(BM_RingQpe);

static void BM_RegisterDistribution(benchmark::State& state) {
  const RegisterQpeSpec spec{static_cast<int>(state.range(0)), 1.234};
  for (auto _ : state) {
    benchmark::DoNotOptimize(register_qpe_distribution(spec));
  }
}
BENCHMARK(BM_RegisterDistribution)->DenseRange(8, 16, 4);

static void BM_NonabelianQpe(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gauge = GaugeField::from_matrix(random_hermitian(n, 7));
  const RingConfig c;
  const AngleGrid grid(1024);
  for (auto _ : state) {
    for (int b = 0; b < n; ++b) benchmark::DoNotOptimize(nonabelian_qpe(gauge, b, c, 100, grid));
  }
}
BENCHMARK(BM_NonabelianQpe)->DenseRange(2, 4);

static void BM_ConfigSpacePropagator(benchmark::State& state) {
  const RingConfig c = RingConfig{}.with_flux(0.7);
  PathSpec spec;
  spec.steps = static_cast<int>(state.range(0));
  spec.grid = AngleGrid(96);
  spec.winding_cutoff = 40;
  for (auto _ : state) {
    benchmark::DoNotOptimize(config_space_propagator(c, spec));
  }
}
BENCHMARK(BM_ConfigSpacePropagator)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_PoissonCheck(benchmark::State& state) {
  const RingConfig c = RingConfig{}.with_flux(0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poisson_step_check(c, 0.0314159, 0.3, 2048, 5));
  }
}
BENCHMARK(BM_PoissonCheck);

static void BM_ClassicalScan(benchmark::State& state) {
  const RingConfig c = RingConfig{}.with_flux(0.7);
  const std::vector<double> hbars{1.0, 0.1, 0.01};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(classical_limit_scan(c, hbars, n, 2.0 / n));
  }
}
BENCHMARK(BM_ClassicalScan)->Arg(100)->Arg(10000);

BENCHMARK_MAIN();
