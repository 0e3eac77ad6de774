#include <benchmark/benchmark.h>

#include "remotetrack/simulator.hpp"

namespace rt = remotetrack;

static rt::PolicyConfig policy_for(int index) {
  switch (index) {
    case 0: return rt::PolicyConfig::uniform(5);
    case 1: return rt::PolicyConfig::change_aware();
    case 2: return rt::PolicyConfig::semantics_aware();
    default: return rt::PolicyConfig::randomized_stationary(0.7);
  }
}

static void BM_Run(benchmark::State& state) {
  rt::SimulationConfig cfg(rt::SourceModel(3, 0.1), rt::ChannelModel::direct(0.922),
                           policy_for(static_cast<int>(state.range(0))));
  cfg.horizon_slots = 100'000;
  for (auto _ : state) benchmark::DoNotOptimize(rt::run(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.horizon_slots));
  state.SetLabel(std::string(rt::to_string(cfg.policy.kind)));
}
BENCHMARK(BM_Run)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
