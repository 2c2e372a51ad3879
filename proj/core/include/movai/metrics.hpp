#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "movai/scene_graph.hpp"
#include "movai/video.hpp"

namespace movai {

inline constexpr std::size_t kFeatureDim = 15;
inline constexpr std::size_t kGradientBins = 8;
inline constexpr double kCovarianceRegularizer = 1e-6;

/// Per-frame statistics: channel means [0,3), channel standard deviations
/// [3,6), normalized gradient-magnitude histogram of the channel-mean image
/// [6,14), mean absolute difference to the previous frame [14] (0 for the
/// first frame).
using FeatureVector = std::array<double, kFeatureDim>;

std::vector<FeatureVector> extract_features(const VideoTensor& v);
/// Mean of the per-frame features: one sample per video.
FeatureVector video_feature(const VideoTensor& v);

struct GaussianSummary {
  std::vector<double> mean;
  std::vector<double> covariance;  // dim x dim, row-major

  std::size_t dim() const { return mean.size(); }
  double cov(std::size_t i, std::size_t j) const { return covariance[i * mean.size() + j]; }
};

/// Sample mean and unbiased covariance plus 1e-6 I. Throws InsufficientSamples
/// for fewer than two samples.
GaussianSummary summarize(const std::vector<FeatureVector>& samples);
GaussianSummary summarize(const std::vector<std::vector<double>>& samples);

/// |mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2), clamped to
/// be non-negative. Square roots by symmetric eigendecomposition with
/// negative eigenvalues clamped to 0. Throws DimensionMismatch.
double frechet_distance(const GaussianSummary& a, const GaussianSummary& b);

/// Cosine of the scene-graph embedding against the video embedding.
double alignment_score(const SceneGraph& graph, const VideoTensor& v);

/// 1 / (1 + mean squared first frame difference), in (0, 1]; 1 for a single frame.
double temporal_consistency(const VideoTensor& v);

}  // namespace movai
