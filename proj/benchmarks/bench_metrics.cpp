#include <benchmark/benchmark.h>

#include "movai/metrics.hpp"
#include "movai/random.hpp"

namespace {

void BM_ExtractFeatures(benchmark::State& state) {
  movai::VideoTensor v(8, 64, 64);
  movai::CounterRng rng(6, 0);
  for (double& x : v.values()) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(movai::extract_features(v));
}
BENCHMARK(BM_ExtractFeatures);

void BM_FrechetDistance(benchmark::State& state) {
  movai::CounterRng rng(7, 0);
  std::vector<std::vector<double>> a, b;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> x(movai::kFeatureDim), y(movai::kFeatureDim);
    for (auto& e : x) e = rng.normal();
    for (auto& e : y) e = rng.normal() + 0.5;
    a.push_back(x);
    b.push_back(y);
  }
  const auto sa = movai::summarize(a), sb = movai::summarize(b);
  for (auto _ : state) benchmark::DoNotOptimize(movai::frechet_distance(sa, sb));
}
BENCHMARK(BM_FrechetDistance);

}  // namespace
