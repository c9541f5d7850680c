#include <benchmark/benchmark.h>

#include "solitonlab/grid.hpp"
#include "solitonlab/scenarios.hpp"
#include "solitonlab/variational.hpp"

using namespace solitonlab;

namespace {

GaussianSum collision_state(int gaussians_per_soliton) {
  const auto ground = stationary_state(gaussians_per_soliton).state.psi;
  GaussianSum psi = boost_translate(ground, -16.0, 1.0, 0.0);
  const GaussianSum right = boost_translate(ground, 16.0, -1.0, 0.0);
  psi.insert(psi.end(), right.begin(), right.end());
  return psi;
}

void BM_Moments(benchmark::State& state) {
  const ExponentTriple e{{0.3, 0.1}, {0.2, -0.4}, {0.05, 0.3}};
  for (auto _ : state) benchmark::DoNotOptimize(moments(e));
}
BENCHMARK(BM_Moments);

void BM_Energy(benchmark::State& state) {
  const GaussianSum psi = collision_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(energy(psi));
}
BENCHMARK(BM_Energy)->Arg(1)->Arg(2)->Arg(3);

void BM_TimeDerivative(benchmark::State& state) {
  const GaussianSum psi = collision_state(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(time_derivative(psi));
}
BENCHMARK(BM_TimeDerivative)->Arg(1)->Arg(2)->Arg(3);

void BM_StationaryState(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stationary_state(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_StationaryState)->Arg(1)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_GridStep(benchmark::State& state) {
  const SolitonSpec spec{0.0, 1.0, 0.0, 1};
  GridState grid = sample_solitons(std::span(&spec, 1), Domain{-60.0, 60.0, 0.05});
  const bool rk4 = state.range(0) == 1;
  for (auto _ : state) {
    grid = rk4 ? rk4_step(grid, 6.25e-4) : euler_step(grid, 1e-4);
    benchmark::DoNotOptimize(grid.amplitudes.data());
  }
  state.SetLabel(rk4 ? "rk4" : "euler");
}
BENCHMARK(BM_GridStep)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
