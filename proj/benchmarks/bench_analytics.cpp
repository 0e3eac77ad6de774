#include <benchmark/benchmark.h>

#include "remotetrack/closed_form.hpp"
#include "remotetrack/stationary.hpp"

namespace rt = remotetrack;
namespace an = remotetrack::analytics;

static void BM_BuildErrorChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const rt::SourceModel source(n, 0.5 / (n - 1));
  for (auto _ : state) benchmark::DoNotOptimize(an::build_error_chain(source, 0.7, 0.8));
}
BENCHMARK(BM_BuildErrorChain)->DenseRange(3, 15, 4);

static void BM_Stationary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto chain = an::build_error_chain(rt::SourceModel(n, 0.5 / (n - 1)), 0.7, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(an::stationary(chain));
}
BENCHMARK(BM_Stationary)->DenseRange(3, 15, 4);

static void BM_PErrorRsThreeStates(benchmark::State& state) {
  const rt::SourceModel source(3, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(an::p_error_rs(source, 0.7, 0.922));
}
BENCHMARK(BM_PErrorRsThreeStates);

static void BM_MemoryCost(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(an::memory_cost({0.07, 0.3}, 2.0, 10));
}
BENCHMARK(BM_MemoryCost);
