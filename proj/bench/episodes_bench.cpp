#include <benchmark/benchmark.h>
#include <omp.h>

#include "staghunt/runner.hpp"

using namespace staghunt;

namespace {

BatchSpec mock_batch(LlmClient& client, int episodes) {
  BatchSpec spec;
  spec.blue = LlmPolicy{mock_model_spec(), RiskProfile::Neutral};
  spec.client = &client;
  spec.master_seed = 17;
  spec.n_episodes = episodes;
  return spec;
}

void BM_EpisodesSerial(benchmark::State& state) {
  const StagHuntEnv env;
  LlmClient client(std::make_shared<MockTransport>());
  const BatchSpec spec = mock_batch(client, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_episodes_serial(env, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EpisodesParallel(benchmark::State& state) {
  const StagHuntEnv env;
  LlmClient client(std::make_shared<MockTransport>(), ClientOptions{.max_in_flight = 1024});
  const BatchSpec spec = mock_batch(client, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_episodes_parallel(env, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ScriptedSerial(benchmark::State& state) {
  const StagHuntEnv env;
  BatchSpec spec;
  spec.n_episodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_episodes_serial(env, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScriptedParallel(benchmark::State& state) {
  const StagHuntEnv env;
  BatchSpec spec;
  spec.n_episodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_episodes_parallel(env, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EpisodesSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EpisodesParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScriptedSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScriptedParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
