#include <benchmark/benchmark.h>

#include "disruption/generators.hpp"
#include "disruption/spectral.hpp"

using namespace disruption;

static void BM_Lambda2(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto g = bipartite_er(c, 10 * c, 0.02, 4);
  for (auto _ : state) benchmark::DoNotOptimize(lambda2(g).value);
}
BENCHMARK(BM_Lambda2)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

static void BM_BruteForceCheeger(benchmark::State& state) {
  const auto users = static_cast<std::size_t>(state.range(0));
  const auto g = bipartite_er(4, users, 0.5, 5);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_cheeger(g));
}
BENCHMARK(BM_BruteForceCheeger)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);
