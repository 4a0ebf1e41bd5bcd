// Serial reference kernels against their OpenMP counterparts on the same batch.

#include <benchmark/benchmark.h>

#include "raven/batch.hpp"

using namespace raven;

namespace {

std::vector<ProblemRequest> requests(int per_config) { return plan_requests(kAllConfigurations, per_config); }

const std::vector<Problem>& problems() {
  static const auto p = generate_batch(requests(20), 7);
  return p;
}

void BM_GenerateSerial(benchmark::State& state) {
  const auto r = requests(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_batch_serial(r, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(r.size()));
}

void BM_GenerateParallel(benchmark::State& state) {
  const auto r = requests(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_batch(r, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(r.size()));
}

void BM_SolveSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_batch_serial(problems()));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(problems().size()));
}

void BM_SolveParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_batch(problems()));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(problems().size()));
}

void BM_RenderSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(render_batch_serial(problems()));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(problems().size()));
}

void BM_RenderParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(render_batch(problems()));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(problems().size()));
}

}  // namespace

BENCHMARK(BM_GenerateSerial)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
