#include <benchmark/benchmark.h>

#include "twistorlab/analysis.hpp"
#include "twistorlab/classifier.hpp"
#include "twistorlab/conics.hpp"
#include "twistorlab/poly.hpp"
#include "twistorlab/surface.hpp"

namespace {

const tlab::SurfaceParams kStar{0.65, -0.3546344024487535, 0.558758547680685, 1.0, 1.0};

void BM_FindValidParams(benchmark::State& state) {
  tlab::SearchConfig cfg;
  cfg.oracle_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tlab::find_valid_params(cfg));
}
BENCHMARK(BM_FindValidParams)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_VerifyHTables(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tlab::verify_h_tables(kStar));
}
BENCHMARK(BM_VerifyHTables)->Unit(benchmark::kMillisecond);

void BM_Eliminate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tlab::eliminate(kStar));
}
BENCHMARK(BM_Eliminate)->Unit(benchmark::kMillisecond);

void BM_RootClustersDoubleRoots(benchmark::State& state) {
  // (x - 1)^2 (x + 2)^2
  const tlab::Polynomial<double> p{4.0, -4.0, -3.0, 2.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(tlab::root_clusters(p));
}
BENCHMARK(BM_RootClustersDoubleRoots);

void BM_VerifyTouching(benchmark::State& state) {
  const tlab::ConicCoeffs c = tlab::generic_conic(kStar, 3.0, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(tlab::verify_touching(c, kStar, 3.0));
}
BENCHMARK(BM_VerifyTouching);

}  // namespace

BENCHMARK_MAIN();
