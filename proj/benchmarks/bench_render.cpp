#include <benchmark/benchmark.h>

#include "movai/lexicon.hpp"
#include "movai/parser.hpp"
#include "movai/render.hpp"
#include "movai/temporal.hpp"

namespace {

const movai::Lexicon& lexicon() {
  static const movai::Lexicon lex = movai::Lexicon::load(MOVAI_DATA_DIR "/lexicon.txt");
  return lex;
}

void BM_ParseAndAnnotate(benchmark::State& state) {
  for (auto _ : state) {
    const auto g = movai::parse_prompt("a small red ball rolling quickly across a table and a cat walking near a tree",
                                       lexicon());
    benchmark::DoNotOptimize(movai::annotate(g, 8));
  }
}
BENCHMARK(BM_ParseAndAnnotate);

void BM_RenderScene(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto g = movai::annotate(movai::parse_prompt("a red ball rolling on a table", lexicon()), 8);
  for (auto _ : state) benchmark::DoNotOptimize(movai::render_scene(g, side, side, 8));
}
BENCHMARK(BM_RenderScene)->Arg(16)->Arg(64)->Arg(256);

void BM_EncodeDecodeVideo(benchmark::State& state) {
  const movai::VideoTensor v(8, 64, 64, 3, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(movai::decode_video(movai::encode_video(v)));
}
BENCHMARK(BM_EncodeDecodeVideo);

}  // namespace
