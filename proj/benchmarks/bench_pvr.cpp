#include <benchmark/benchmark.h>

#include "movai/pvr.hpp"
#include "movai/random.hpp"

namespace {

movai::Tensor text_embeddings() {
  movai::CounterRng rng(3, 0);
  movai::Tensor t({3, 32});
  for (double& x : t.values()) x = rng.normal();
  return t;
}

void BM_RefineStep(benchmark::State& state) {
  const auto level = static_cast<std::size_t>(state.range(0));
  const auto params = movai::init_params(movai::ModelConfig{}, 0);
  const std::size_t side = 16u << level;
  movai::VideoTensor v(8, side, side);
  movai::CounterRng rng(4, 0);
  for (double& x : v.values()) x = rng.uniform();
  const auto text = text_embeddings();
  for (auto _ : state) benchmark::DoNotOptimize(movai::refine_step(v, text, params, level));
}
BENCHMARK(BM_RefineStep)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_RefineStepBackward(benchmark::State& state) {
  const auto level = static_cast<std::size_t>(state.range(0));
  const auto params = movai::init_params(movai::ModelConfig{}, 0);
  const std::size_t side = 16u << level;
  movai::VideoTensor v(8, side, side);
  movai::CounterRng rng(5, 0);
  for (double& x : v.values()) x = rng.uniform();
  const auto text = text_embeddings();
  movai::RefineCache cache;
  movai::refine_step(v, text, params, level, &cache);
  for (auto _ : state) benchmark::DoNotOptimize(movai::refine_step_backward(v, text, params, level, cache, v));
}
BENCHMARK(BM_RefineStepBackward)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Upsample(benchmark::State& state) {
  const movai::VideoTensor v(8, 32, 32, 3, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(movai::upsample(v));
}
BENCHMARK(BM_Upsample);

}  // namespace
