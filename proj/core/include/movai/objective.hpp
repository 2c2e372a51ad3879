#pragma once

#include <vector>

#include "movai/relations.hpp"
#include "movai/video.hpp"

namespace movai {

/// L = recon + lambda_temporal * temporal + lambda_semantic * semantic.
/// The adversarial weight is accepted for config compatibility but must be 0.
struct LossWeights {
  double lambda_temporal = 0.5;
  double lambda_semantic = 0.1;
  double lambda_adversarial = 0.0;

  /// Throws ConfigError on negative weights or a nonzero adversarial weight.
  void validate() const;
};

struct LossBreakdown {
  double recon = 0.0;
  double temporal = 0.0;
  double semantic = 0.0;
  double composite = 0.0;
};

/// Mean squared error over all elements.
double recon_loss(const VideoTensor& v, const VideoTensor& target);
VideoTensor recon_loss_gradient(const VideoTensor& v, const VideoTensor& target);

/// Mean squared second frame difference; 0 for fewer than 3 frames.
double temporal_loss(const VideoTensor& v);
VideoTensor temporal_loss_gradient(const VideoTensor& v);

/// 1 - cos(a, b), in [0, 2]. Throws ZeroVector, DimensionMismatch.
double semantic_loss(const std::vector<double>& video_embedding, const std::vector<double>& graph_embedding);
/// Gradient with respect to the first argument.
std::vector<double> semantic_loss_gradient(const std::vector<double>& video_embedding,
                                           const std::vector<double>& graph_embedding);

/// Per-channel mean over all frames and pixels, projected by color_basis().
std::vector<double> video_embedding(const VideoTensor& v);
/// Mean of the entity embedding rows.
std::vector<double> graph_embedding(const RelationFeatures& features);

struct CompositeResult {
  LossBreakdown loss;
  VideoTensor gradient;  // d composite / d v
};

CompositeResult composite_loss(const VideoTensor& v, const VideoTensor& target,
                               const std::vector<double>& graph_embedding, const LossWeights& w);

}  // namespace movai
