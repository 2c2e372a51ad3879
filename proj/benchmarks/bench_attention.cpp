#include <benchmark/benchmark.h>

#include "movai/random.hpp"
#include "movai/tensor.hpp"
#include "movai/tsam.hpp"

namespace {

movai::Tensor random_tensor(std::vector<std::size_t> shape, movai::CounterRng& rng) {
  movai::Tensor t(std::move(shape));
  for (double& x : t.values()) x = rng.normal();
  return t;
}

void BM_ScaledDotAttention(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  movai::CounterRng rng(0, 0);
  const auto q = random_tensor({n, 8}, rng), k = random_tensor({n, 8}, rng), v = random_tensor({n, 8}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(movai::scaled_dot_attention(q, k, v));
}
BENCHMARK(BM_ScaledDotAttention)->Arg(8)->Arg(64)->Arg(256);

void BM_AttentionBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  movai::CounterRng rng(1, 0);
  const auto q = random_tensor({n, 8}, rng), k = random_tensor({n, 8}, rng), v = random_tensor({n, 8}, rng);
  const auto up = random_tensor({n, 8}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(movai::attention_backward(q, k, v, up));
}
BENCHMARK(BM_AttentionBackward)->Arg(8)->Arg(64)->Arg(256);

void BM_TsamForward(benchmark::State& state) {
  const auto s = static_cast<std::size_t>(state.range(0));
  movai::CounterRng rng(2, 0);
  movai::AttentionParams p;
  p.heads = 4;
  for (movai::Projections* pr : {&p.spatial, &p.temporal, &p.cross})
    for (movai::Tensor* w : {&pr->wq, &pr->wk, &pr->wv}) *w = random_tensor({32, 32}, rng);
  const auto x = random_tensor({8, s, 32}, rng), text = random_tensor({3, 32}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(movai::tsam_forward(x, text, p, {}));
}
BENCHMARK(BM_TsamForward)->Arg(4)->Arg(16)->Arg(64);

}  // namespace
