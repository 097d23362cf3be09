#include <benchmark/benchmark.h>

#include "strauss/exponents.hpp"
#include "strauss/special_functions.hpp"

using namespace strauss;

static void BM_PhiEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double r = 0.0;
  for (auto _ : state) {
    r = r > 50.0 ? 0.0 : r + 0.37;
    benchmark::DoNotOptimize(phi_scaled(n, r));
  }
}
BENCHMARK(BM_PhiEval)->Arg(2)->Arg(3)->Arg(5);

static void BM_XiEval(benchmark::State& state) {
  const TestFunctionConfig cfg{3, 1.0, 1.0, static_cast<int>(state.range(0))};
  const double q = q_parameter(3);
  for (auto _ : state) benchmark::DoNotOptimize(xi_q_eval(cfg, q, 20.0, 5.0));
}
BENCHMARK(BM_XiEval)->Arg(64)->Arg(128);

static void BM_EtaEval(benchmark::State& state) {
  const TestFunctionConfig cfg{3, 1.0, 1.0, static_cast<int>(state.range(0))};
  const double q = q_parameter(3);
  for (auto _ : state) benchmark::DoNotOptimize(eta_q_eval(cfg, q, 20.0, 7.0, 5.0));
}
BENCHMARK(BM_EtaEval)->Arg(64)->Arg(128);

static void BM_PsiBallIntegral(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(psi_ball_integral(3, 1.0, 50.0));
}
BENCHMARK(BM_PsiBallIntegral);
