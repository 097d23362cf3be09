#include <benchmark/benchmark.h>

#include "strauss/radial_solver.hpp"
#include "strauss/weighted_norms.hpp"

using namespace strauss;

static void BM_March(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto grid = make_grid(h, 5.0, 1.0);
  const auto data = RadialData::default_bump(0.5);
  const auto spec = ModulusSpec::power_law(1.0);
  for (auto _ : state) {
    auto run = march(data, spec, grid);
    benchmark::DoNotOptimize(run.field.data());
  }
  state.counters["levels"] = grid.t_levels;
  state.counters["nodes"] = grid.r_nodes;
}
BENCHMARK(BM_March)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_MarchThreads(benchmark::State& state) {
  const auto grid = make_grid(0.0125, 5.0, 1.0);
  const MarchOptions opt{1e6, true, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    auto run = march(RadialData::default_bump(0.5), ModulusSpec::power_law(1.0), grid, opt);
    benchmark::DoNotOptimize(run.field.data());
  }
}
BENCHMARK(BM_MarchThreads)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_KeyIntegral(benchmark::State& state) {
  const auto spec = ModulusSpec::double_log_global(-1.0);
  const double xi = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(key_integral_I(xi, 0.5, spec).value);
}
BENCHMARK(BM_KeyIntegral)->Arg(10)->Arg(1000)->Arg(100000);
