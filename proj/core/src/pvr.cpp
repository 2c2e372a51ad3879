#include "movai/pvr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "movai/error.hpp"
#include "movai/random.hpp"
#include "movai/relations.hpp"
#include "movai/render.hpp"

namespace movai {
namespace {

// Stream ids of the counter-based generator; one per purpose.
constexpr std::uint64_t kInitStream = 0x100;
constexpr std::uint64_t kNoiseStream = 0x200;
constexpr std::uint64_t kTrainStream = 0x300;

Tensor xavier(std::size_t rows, std::size_t cols, CounterRng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor t({rows, cols});
  for (double& x : t.values()) x = (2.0 * rng.uniform() - 1.0) * bound;
  return t;
}

std::vector<const Tensor*> matrices(const LevelParams& p) {
  const auto& a = p.attention;
  return {&p.encode,      &p.decode,      &a.spatial.wq, &a.spatial.wk, &a.spatial.wv,
          &a.temporal.wq, &a.temporal.wk, &a.temporal.wv, &a.cross.wq,  &a.cross.wk,
          &a.cross.wv};
}

std::vector<Tensor*> matrices(LevelParams& p) {
  auto& a = p.attention;
  return {&p.encode,      &p.decode,      &a.spatial.wq, &a.spatial.wk, &a.spatial.wv,
          &a.temporal.wq, &a.temporal.wk, &a.temporal.wv, &a.cross.wq,  &a.cross.wk,
          &a.cross.wv};
}

Tensor as_matrix(const Tensor& t3) {
  return Tensor({t3.dim(0) * t3.dim(1), t3.dim(2)}, std::vector<double>(t3.values().begin(), t3.values().end()));
}

Tensor as_latent(const Tensor& m, std::size_t n, std::size_t s) {
  return Tensor({n, s, m.cols()}, std::vector<double>(m.values().begin(), m.values().end()));
}

void require_level(const ModelParams& params, std::size_t level) {
  if (level >= params.levels.size()) throw ShapeMismatch("level " + std::to_string(level) + " out of range");
}

}  // namespace

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  if (config.heads == 0 || config.d_model % config.heads != 0) throw ConfigError("d_model must divide into heads");
  ModelParams params;
  params.config = config;
  const std::size_t d = config.d_model, p = config.patch_dim();
  for (std::size_t l = 0; l < config.levels; ++l) {
    CounterRng rng(seed, kInitStream + l);
    LevelParams lp;
    lp.encode = xavier(p, d, rng);
    lp.decode = xavier(d, p, rng);
    lp.attention.heads = config.heads;
    for (Projections* pr : {&lp.attention.spatial, &lp.attention.temporal, &lp.attention.cross}) {
      pr->wq = xavier(d, d, rng);
      pr->wk = xavier(d, d, rng);
      pr->wv = xavier(d, d, rng);
    }
    lp.gain = 1.0;
    params.levels.push_back(std::move(lp));
  }
  return params;
}

Tensor flatten(const LevelParams& p) {
  std::vector<double> out;
  for (const Tensor* m : matrices(p)) out.insert(out.end(), m->values().begin(), m->values().end());
  out.insert(out.end(), p.mix.logits.begin(), p.mix.logits.end());
  out.push_back(p.gain);
  const std::size_t n = out.size();
  return Tensor({n}, std::move(out));
}

void unflatten(const Tensor& flat, LevelParams& p) {
  std::size_t expected = 4;
  for (Tensor* m : matrices(p)) expected += m->size();
  if (flat.size() != expected) throw ShapeMismatch("flat parameter vector has wrong length");
  std::size_t at = 0;
  for (Tensor* m : matrices(p)) {
    std::copy_n(flat.data() + at, m->size(), m->data());
    at += m->size();
  }
  for (double& l : p.mix.logits) l = flat[at++];
  p.gain = flat[at];
}

LevelParams zeros_like(const LevelParams& p) {
  LevelParams z = p;
  for (Tensor* m : matrices(z)) std::fill(m->values().begin(), m->values().end(), 0.0);
  z.mix.logits = {0.0, 0.0, 0.0};
  z.gain = 0.0;
  return z;
}

void NoiseSchedule::validate() const {
  if (sigma.empty()) throw ConfigError("noise schedule needs at least one level");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw ConfigError("noise sigma must be positive");
    if (i > 0 && !(sigma[i] < sigma[i - 1])) throw ConfigError("noise sigma must strictly decrease across levels");
  }
  if (steps_per_level < 1) throw ConfigError("steps per level must be positive");
}

void LevelSpec::validate(std::size_t patch) const {
  if (resolution.empty()) throw ConfigError("level spec needs at least one level");
  if (frames < 1) throw ConfigError("frame count must be positive");
  for (std::size_t i = 0; i < resolution.size(); ++i) {
    const auto [h, w] = resolution[i];
    if (h == 0 || w == 0 || h % patch != 0 || w % patch != 0)
      throw ConfigError("level resolution must be a positive multiple of the patch size");
    if (i > 0 && (h != 2 * resolution[i - 1].first || w != 2 * resolution[i - 1].second))
      throw ConfigError("level resolutions must double per level");
  }
}

Tensor patchify(const VideoTensor& v, std::size_t patch) {
  if (patch == 0 || v.height() % patch != 0 || v.width() % patch != 0)
    throw ShapeMismatch("frame size must be a multiple of the patch size");
  const std::size_t gh = v.height() / patch, gw = v.width() / patch, c = v.channels();
  const std::size_t pd = patch * patch * c;
  Tensor out({v.frames(), gh * gw, pd});
  for (std::size_t t = 0; t < v.frames(); ++t)
    for (std::size_t by = 0; by < gh; ++by)
      for (std::size_t bx = 0; bx < gw; ++bx) {
        double* dst = out.data() + (t * gh * gw + by * gw + bx) * pd;
        for (std::size_t py = 0; py < patch; ++py)
          for (std::size_t px = 0; px < patch; ++px)
            for (std::size_t ch = 0; ch < c; ++ch)
              *dst++ = v.at(t, by * patch + py, bx * patch + px, ch);
      }
  return out;
}

VideoTensor depatchify(const Tensor& patches, std::size_t frames, std::size_t height, std::size_t width,
                       std::size_t channels, std::size_t patch) {
  const std::size_t gh = height / patch, gw = width / patch, pd = patch * patch * channels;
  if (patches.rank() != 3 || patches.dim(0) != frames || patches.dim(1) != gh * gw || patches.dim(2) != pd)
    throw ShapeMismatch("patch tensor does not match video dimensions");
  VideoTensor v(frames, height, width, channels);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t by = 0; by < gh; ++by)
      for (std::size_t bx = 0; bx < gw; ++bx) {
        const double* src = patches.data() + (t * gh * gw + by * gw + bx) * pd;
        for (std::size_t py = 0; py < patch; ++py)
          for (std::size_t px = 0; px < patch; ++px)
            for (std::size_t ch = 0; ch < channels; ++ch)
              v.at(t, by * patch + py, bx * patch + px, ch) = *src++;
      }
  return v;
}

VideoTensor upsample(const VideoTensor& v) {
  const std::size_t h = v.height(), w = v.width(), c = v.channels();
  // Rows first, then columns.
  VideoTensor rows(v.frames(), 2 * h, w, c);
  for (std::size_t t = 0; t < v.frames(); ++t)
    for (std::size_t y = 0; y < 2 * h; ++y) {
      const std::size_t k = y / 2;
      const std::size_t other = y % 2 == 0 ? (k + h - 1) % h : (k + 1) % h;
      for (std::size_t x = 0; x < w; ++x)
        for (std::size_t ch = 0; ch < c; ++ch)
          rows.at(t, y, x, ch) = 0.75 * v.at(t, k, x, ch) + 0.25 * v.at(t, other, x, ch);
    }
  VideoTensor out(v.frames(), 2 * h, 2 * w, c);
  for (std::size_t t = 0; t < v.frames(); ++t)
    for (std::size_t y = 0; y < 2 * h; ++y)
      for (std::size_t x = 0; x < 2 * w; ++x) {
        const std::size_t k = x / 2;
        const std::size_t other = x % 2 == 0 ? (k + w - 1) % w : (k + 1) % w;
        for (std::size_t ch = 0; ch < c; ++ch)
          out.at(t, y, x, ch) = 0.75 * rows.at(t, y, k, ch) + 0.25 * rows.at(t, y, other, ch);
      }
  return out;
}

VideoTensor refine_step(const VideoTensor& v, const Tensor& text, const ModelParams& params, std::size_t level,
                        RefineCache* cache) {
  require_level(params, level);
  const LevelParams& lp = params.levels[level];
  const std::size_t patch = params.config.patch;
  if (v.channels() != params.config.channels) throw ShapeMismatch("video channel count differs from model");

  Tensor patches = patchify(v, patch);
  const std::size_t n = patches.dim(0), s = patches.dim(1);
  Tensor tokens = as_latent(matmul(as_matrix(patches), lp.encode), n, s);
  TsamForward fwd = tsam_forward(tokens, text, lp.attention, lp.mix);
  const Tensor decoded = as_latent(matmul(as_matrix(fwd.out), lp.decode), n, s);
  VideoTensor delta = depatchify(decoded, v.frames(), v.height(), v.width(), v.channels(), patch);

  VideoTensor out = v;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += lp.gain * delta[i];
  if (cache) {
    cache->patches = std::move(patches);
    cache->tokens = std::move(tokens);
    cache->tsam = std::move(fwd);
    cache->delta = std::move(delta);
  }
  return out;
}

RefineGrads refine_step_backward(const VideoTensor& v, const Tensor& text, const ModelParams& params,
                                 std::size_t level, const RefineCache& cache, const VideoTensor& upstream) {
  require_level(params, level);
  if (!upstream.same_shape(v)) throw ShapeMismatch("refine upstream gradient shape");
  const LevelParams& lp = params.levels[level];
  const std::size_t patch = params.config.patch;
  const std::size_t n = cache.patches.dim(0), s = cache.patches.dim(1);

  RefineGrads g;
  g.dparams = zeros_like(lp);
  for (std::size_t i = 0; i < v.size(); ++i) g.dparams.gain += upstream[i] * cache.delta[i];

  Tensor ddecoded = as_matrix(patchify(upstream, patch));
  for (double& x : ddecoded.values()) x *= lp.gain;
  const Tensor y = as_matrix(cache.tsam.out);
  g.dparams.decode = matmul(transpose(y), ddecoded);
  const Tensor dy = as_latent(matmul(ddecoded, transpose(lp.decode)), n, s);

  TsamGrads tg = tsam_backward(cache.tokens, text, lp.attention, lp.mix, cache.tsam, dy);
  g.dparams.attention = std::move(tg.dparams);
  g.dparams.mix.logits = tg.dlogits;

  const Tensor dtokens = as_matrix(tg.dx);
  const Tensor patches = as_matrix(cache.patches);
  g.dparams.encode = matmul(transpose(patches), dtokens);
  const Tensor dpatches = as_latent(matmul(dtokens, transpose(lp.encode)), n, s);
  g.dv = depatchify(dpatches, v.frames(), v.height(), v.width(), v.channels(), patch);
  for (std::size_t i = 0; i < v.size(); ++i) g.dv[i] += upstream[i];
  return g;
}

Tensor conditioning(const SceneGraph& graph) { return build_relations(graph).embeddings; }

VideoTensor generate(const SceneGraph& graph, const ModelParams& params, const NoiseSchedule& schedule,
                     const LevelSpec& spec, std::uint64_t seed) {
  if (graph.annotations.empty()) throw MissingAnnotations("graph has no temporal annotations");
  schedule.validate();
  spec.validate(params.config.patch);
  const std::size_t levels = params.levels.size();
  if (schedule.sigma.size() != levels || spec.resolution.size() != levels)
    throw ConfigError("model, noise schedule and level spec disagree on the number of levels");
  const Tensor text = conditioning(graph);

  auto add_noise = [&](VideoTensor& v, std::size_t level) {
    CounterRng rng(seed, kNoiseStream + level);
    const double sigma = schedule.sigma[level];
    for (double& x : v.values()) x += sigma * rng.normal();
  };

  VideoTensor v(spec.frames, spec.resolution[0].first, spec.resolution[0].second, params.config.channels);
  add_noise(v, 0);
  for (std::size_t l = 0; l < levels; ++l) {
    for (int k = 0; k < schedule.steps_per_level; ++k) v = refine_step(v, text, params, l);
    if (l + 1 < levels) {
      v = upsample(v);
      add_noise(v, l + 1);
    }
  }
  clamp01(v);
  return v;
}

TrainResult train(const std::vector<SceneGraph>& scenes, ModelParams params, const TrainHyper& hyper,
                  const NoiseSchedule& schedule, const LevelSpec& spec) {
  if (hyper.steps < 1) throw ConfigError("training needs at least one step");
  if (scenes.empty()) throw ConfigError("training needs at least one scene");
  if (!(hyper.learning_rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
  hyper.weights.validate();
  schedule.validate();
  spec.validate(params.config.patch);
  const std::size_t levels = params.levels.size();
  if (schedule.sigma.size() != levels || spec.resolution.size() != levels)
    throw ConfigError("model, noise schedule and level spec disagree on the number of levels");

  std::vector<Tensor> text;
  std::vector<std::vector<double>> target_embedding;
  for (const auto& g : scenes) {
    const auto features = build_relations(g);
    text.push_back(features.embeddings);
    target_embedding.push_back(graph_embedding(features));
  }
  std::map<std::pair<std::size_t, std::size_t>, VideoTensor> renders;

  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(hyper.steps));
  CounterRng rng(hyper.seed, kTrainStream);
  for (int step = 0; step < hyper.steps; ++step) {
    const std::size_t scene = rng.below(static_cast<std::uint32_t>(scenes.size()));
    const std::size_t level = rng.below(static_cast<std::uint32_t>(levels));
    auto key = std::make_pair(scene, level);
    auto it = renders.find(key);
    if (it == renders.end()) {
      const auto [h, w] = spec.resolution[level];
      it = renders.emplace(key, render_scene(scenes[scene], h, w, spec.frames)).first;
    }
    const VideoTensor& target = it->second;
    VideoTensor noisy = target;
    for (double& x : noisy.values()) x += schedule.sigma[level] * rng.normal();

    RefineCache cache;
    const VideoTensor out = refine_step(noisy, text[scene], params, level, &cache);
    const CompositeResult loss = composite_loss(out, target, target_embedding[scene], hyper.weights);
    result.history.push_back(loss.loss);
    if (hyper.learning_rate == 0.0) continue;

    const RefineGrads grads = refine_step_backward(noisy, text[scene], params, level, cache, loss.gradient);
    Tensor flat = flatten(params.levels[level]);
    axpy(flat, -hyper.learning_rate, flatten(grads.dparams));
    unflatten(flat, params.levels[level]);
  }
  result.params = std::move(params);
  return result;
}

std::string history_csv(const std::vector<LossBreakdown>& history) {
  std::string out = "step,recon,temporal,semantic,composite\n";
  char buf[160];
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& h = history[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", i + 1, h.recon, h.temporal, h.semantic,
                  h.composite);
    out += buf;
  }
  return out;
}

}  // namespace movai
