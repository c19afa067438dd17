#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "pdbary/barycenter.hpp"

namespace {

const pdbary::Ensemble& small() {
  static const auto e = bench::terrainEnsemble(1, 20, 40);
  return e;
}

// the speedup ensemble: 50 members of ~500 points
const pdbary::Ensemble& large() {
  static const auto e = bench::terrainEnsemble(1, 50, 72);
  return e;
}

void BM_Progressive(benchmark::State& state) {
  pdbary::BarycenterConfig config;
  config.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(pdbary::progressiveBarycenter(small(), {}, config).approxEnergy);
}
BENCHMARK(BM_Progressive)->Unit(benchmark::kMillisecond);

void BM_ReferenceAuction(benchmark::State& state) {
  pdbary::ReferenceConfig config;
  config.seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        pdbary::referenceBarycenter(small(), {}, pdbary::Solver::Auction, config).approxEnergy);
}
BENCHMARK(BM_ReferenceAuction)->Unit(benchmark::kMillisecond);

void BM_ProgressiveThreads(benchmark::State& state) {
  pdbary::BarycenterConfig config;
  config.seed = 1;
  config.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pdbary::progressiveBarycenter(large(), {}, config).approxEnergy);
}
BENCHMARK(BM_ProgressiveThreads)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Iterations(1)->UseRealTime()->Unit(benchmark::kSecond);

}  // namespace
