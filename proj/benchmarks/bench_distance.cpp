#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "pdbary/assignment.hpp"

namespace {

void BM_Auction(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = bench::randomDiagram(rng, n), g = bench::randomDiagram(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(pdbary::auctionUntilConverged(f, g, {}, 0.01).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Auction)->RangeMultiplier(4)->Range(16, 4096)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Munkres(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = bench::randomDiagram(rng, n), g = bench::randomDiagram(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(pdbary::munkresAssignment(f, g, {}).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Munkres)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace
