#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "movai/objective.hpp"
#include "movai/scene_graph.hpp"
#include "movai/tensor.hpp"
#include "movai/tsam.hpp"
#include "movai/video.hpp"

namespace movai {

/// Dimensions shared by every refinement level.
struct ModelConfig {
  std::size_t patch = 8;
  std::size_t channels = 3;
  std::size_t d_model = 32;
  std::size_t heads = 4;
  std::size_t levels = 3;

  std::size_t patch_dim() const { return patch * patch * channels; }
  bool operator==(const ModelConfig&) const = default;
};

/// Parameters of one refinement level.
struct LevelParams {
  Tensor encode;            // patch_dim x d_model
  Tensor decode;            // d_model x patch_dim
  AttentionParams attention;
  TsamWeights mix;
  double gain = 1.0;        // residual step size

  bool operator==(const LevelParams&) const = default;
};

struct ModelParams {
  ModelConfig config;
  std::vector<LevelParams> levels;

  bool operator==(const ModelParams&) const = default;
};

/// Xavier-uniform matrices drawn from CounterRng(seed, level stream), zero
/// branch logits, unit gain.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

/// Flat parameter vector of one level: encode, decode, spatial/temporal/cross
/// W_Q W_K W_V, three branch logits, gain.
Tensor flatten(const LevelParams& p);
void unflatten(const Tensor& flat, LevelParams& p);
LevelParams zeros_like(const LevelParams& p);

struct NoiseSchedule {
  std::vector<double> sigma{1.0, 0.5, 0.25};
  int steps_per_level = 8;

  /// Positive, strictly decreasing sigmas; positive step count.
  void validate() const;
};

struct LevelSpec {
  std::vector<std::pair<std::size_t, std::size_t>> resolution{{16, 16}, {32, 32}, {64, 64}};
  std::size_t frames = 8;

  /// Resolutions double per level and are multiples of `patch`.
  void validate(std::size_t patch) const;
};

/// [n x S x patch_dim] with S = (H/patch)(W/patch); patch vector order (py, px, c).
Tensor patchify(const VideoTensor& v, std::size_t patch);
VideoTensor depatchify(const Tensor& patches, std::size_t frames, std::size_t height, std::size_t width,
                       std::size_t channels, std::size_t patch);

/// 2x bilinear upsampling per frame with half-pixel centers and periodic
/// boundaries: out[2k] = 3/4 in[k] + 1/4 in[k-1], out[2k+1] = 3/4 in[k] +
/// 1/4 in[k+1] along each axis, indices mod size.
VideoTensor upsample(const VideoTensor& v);

/// Intermediates of one refine_step, reused by the backward pass.
struct RefineCache {
  Tensor patches;   // [n x S x patch_dim]
  Tensor tokens;    // [n x S x d_model]
  TsamForward tsam;
  VideoTensor delta;
};

/// v + gain * depatchify(decode(TSAM(encode(patchify(v)), text))).
/// `text` holds the entity embeddings [m x d_model].
VideoTensor refine_step(const VideoTensor& v, const Tensor& text, const ModelParams& params, std::size_t level,
                        RefineCache* cache = nullptr);

struct RefineGrads {
  LevelParams dparams;
  VideoTensor dv;
};
/// Gradient of <upstream, refine_step(v, ...)> with respect to the level's
/// parameters and the input video.
RefineGrads refine_step_backward(const VideoTensor& v, const Tensor& text, const ModelParams& params,
                                 std::size_t level, const RefineCache& cache, const VideoTensor& upstream);

/// Entity embeddings used as conditioning for `graph`.
Tensor conditioning(const SceneGraph& graph);

/// Seeded noise-to-video chain. Throws MissingAnnotations when the graph has
/// no annotations.
VideoTensor generate(const SceneGraph& graph, const ModelParams& params, const NoiseSchedule& schedule,
                     const LevelSpec& spec, std::uint64_t seed);

struct TrainHyper {
  int steps = 200;
  double learning_rate = 1e-2;
  LossWeights weights;
  std::uint64_t seed = 42;
};

struct TrainResult {
  ModelParams params;
  std::vector<LossBreakdown> history;
};

/// Plain gradient descent. Each step draws a scene and a level from
/// CounterRng(seed, train stream), renders the scene at that level, adds
/// sigma_level Gaussian noise, applies one refine_step and descends the
/// composite loss against the clean render.
TrainResult train(const std::vector<SceneGraph>& scenes, ModelParams params, const TrainHyper& hyper,
                  const NoiseSchedule& schedule, const LevelSpec& spec);

/// Loss-history CSV: header then one row per step, %.17g.
std::string history_csv(const std::vector<LossBreakdown>& history);

/// Model file: "MVAI", u32 version, u32 level count, then per level u32
/// patch, channels, d_model, heads followed by the flattened level as
/// little-endian float64. Byte-exact round trip.
std::vector<std::uint8_t> encode_model(const ModelParams& params);
/// Throws FormatError(byte offset, reason).
ModelParams decode_model(const std::vector<std::uint8_t>& bytes);
void save_model(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_model(const std::filesystem::path& path);

inline constexpr std::uint32_t kModelVersion = 1;

}  // namespace movai
