#include <benchmark/benchmark.h>

#include "strauss/blowup.hpp"
#include "strauss/modulus.hpp"

using namespace strauss;

static void BM_Ledger(benchmark::State& state) {
  const int J = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m_sequence(3, IterationConstants{}, J).worst_margin);
}
BENCHMARK(BM_Ledger)->Arg(30)->Arg(200);

static void BM_CStrClassify(benchmark::State& state) {
  const auto spec = ModulusSpec::iterated_log_blowup(1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(c_str_classify(spec, 3).tail_ratio);
}
BENCHMARK(BM_CStrClassify);
