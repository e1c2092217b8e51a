#include <benchmark/benchmark.h>

#include "maslov/bundle.hpp"
#include "maslov/maslov.hpp"
#include "maslov/model.hpp"
#include "maslov/pde.hpp"
#include "maslov/pulse.hpp"
#include "maslov/singular_orbit.hpp"
#include "maslov/spectrum.hpp"

using namespace maslov;

namespace {

const PulseProfile& stable_profile() {
  static const PulseProfile prof = [] {
    const ModelParams p;
    return solve_pulse(p, solve_jump_condition(p).at(0));
  }();
  return prof;
}

}  // namespace

static void BM_JumpCondition(benchmark::State& state) {
  ModelParams p;
  p.alpha = -5.0;
  p.beta = 5.0;
  p.gamma = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(solve_jump_condition(p));
}
BENCHMARK(BM_JumpCondition);

static void BM_SolvePulse(benchmark::State& state) {
  ModelParams p;
  p.epsilon = 1.0 / static_cast<double>(state.range(0));
  const JumpSolution j = solve_jump_condition(p).at(0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_pulse(p, j));
}
BENCHMARK(BM_SolvePulse)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_GaussStep(benchmark::State& state) {
  const PulseProfile& prof = stable_profile();
  double xi = -90.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss_step(prof, xi, 0.5));
    xi = xi > 90.0 ? -90.0 : xi + 0.37;
  }
}
BENCHMARK(BM_GaussStep);

static void BM_ForwardBundle(benchmark::State& state) {
  const PulseProfile& prof = stable_profile();
  for (auto _ : state) benchmark::DoNotOptimize(evolve_bundle(prof, BundleDirection::forward, prof.back_crossing()));
}
BENCHMARK(BM_ForwardBundle)->Unit(benchmark::kMillisecond);

static void BM_MaslovIndex(benchmark::State& state) {
  const PulseProfile& prof = stable_profile();
  for (auto _ : state) benchmark::DoNotOptimize(maslov_index(prof));
}
BENCHMARK(BM_MaslovIndex)->Unit(benchmark::kMillisecond);

static void BM_PointSpectrum(benchmark::State& state) {
  const PulseProfile& prof = stable_profile();
  SpectrumOptions o;
  o.nodes = static_cast<int>(state.range(0));
  o.richardson = false;
  o.localization = false;
  for (auto _ : state) benchmark::DoNotOptimize(point_spectrum(prof, o));
}
BENCHMARK(BM_PointSpectrum)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_PdeUnitTime(benchmark::State& state) {
  const PulseProfile& prof = stable_profile();
  const auto grid = pde_grid(prof, static_cast<int>(state.range(0)));
  SimState s = state_from_profile(prof, grid);
  add_noise(s, 1e-3);
  EvolveOptions o;
  o.snapshot_interval = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(s, 1.0, 0.05, o));
}
BENCHMARK(BM_PdeUnitTime)->Arg(800)->Arg(1600)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
