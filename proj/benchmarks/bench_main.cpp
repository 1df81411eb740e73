#include <benchmark/benchmark.h>

#include <algorithm>

#include "slowmo/layers.hpp"
#include "slowmo/potential.hpp"
#include "slowmo/profiles.hpp"
#include "slowmo/solver.hpp"

using namespace slowmo;

namespace {

// One accepted step on a two-layer datum, per scheme and mesh size.
void BM_Step(benchmark::State& state) {
  const PotentialParams prm{2, 4, 0.1};
  const auto scheme = static_cast<Scheme>(state.range(0));
  const Grid g(-1, 1, static_cast<std::size_t>(state.range(1)) + 1);
  const Field u = build_layer_datum(StepFunction(-1, 1, {-0.4, 0.4}), prm, g);
  SolverConfig cfg;
  cfg.scheme = scheme;
  const double dt = std::min(cfg.dt_max, stable_dt(u, prm, cfg));
  for (auto _ : state) benchmark::DoNotOptimize(step(u, dt, prm, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Step)->ArgsProduct({{0, 1, 2}, {200, 1600, 12800}});

void BM_TransitionEnergy(benchmark::State& state) {
  const PotentialParams prm{static_cast<double>(state.range(0)) / 2, 4.5, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(transition_energy(prm));
}
BENCHMARK(BM_TransitionEnergy)->DenseRange(3, 9, 2);

void BM_StandingWaveSample(benchmark::State& state) {
  const PotentialParams prm{3, 4, 0.1};
  const auto wave = standing_wave(prm, ProfileKind::inverted_integral);
  double x = -1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wave(x));
    x = x > 1 ? -1 : x + 1e-3;
  }
}
BENCHMARK(BM_StandingWaveSample);

void BM_Period(benchmark::State& state) {
  const PotentialParams prm{2, 4, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(period(prm, 0.9));
}
BENCHMARK(BM_Period);

}  // namespace
BENCHMARK_MAIN();
