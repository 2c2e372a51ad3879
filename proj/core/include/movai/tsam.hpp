#pragma once

#include <array>
#include <cstddef>

#include "movai/tensor.hpp"

namespace movai {

/// Latent videos are rank-3 tensors [frames x spatial tokens x d_model].

/// W_Q, W_K, W_V of one attention branch, each d_model x d_model (all heads
/// side by side; head h uses columns [h d_k, (h + 1) d_k)).
struct Projections {
  Tensor wq, wk, wv;
  bool operator==(const Projections&) const = default;
};

struct AttentionParams {
  Projections spatial, temporal, cross;
  std::size_t heads = 4;

  std::size_t d_model() const { return spatial.wq.rows(); }
  bool operator==(const AttentionParams&) const = default;
};

/// Branch weights (alpha, beta, gamma) = softmax(logits).
struct TsamWeights {
  std::array<double, 3> logits{0.0, 0.0, 0.0};
  std::array<double, 3> weights() const;
  bool operator==(const TsamWeights&) const = default;
};

/// Sinusoidal frame-position table [frames x d]: even channels
/// sin(t / 10000^(i/d)), odd channels cos(t / 10000^((i-1)/d)).
Tensor frame_position_encoding(std::size_t frames, std::size_t d);

/// Multi-head attention of `queries` [n_q x d] over `context` [n_k x d];
/// heads are batched single-head scaled dot-product attention, concatenated.
Tensor multi_head_attention(const Tensor& queries, const Tensor& context, const Projections& p, std::size_t heads);

struct MultiHeadGrads {
  Tensor dqueries, dcontext;
  Projections dweights;
};
MultiHeadGrads multi_head_attention_backward(const Tensor& queries, const Tensor& context, const Projections& p,
                                             std::size_t heads, const Tensor& upstream);

/// Attention among the S tokens of each frame independently.
Tensor spatial_attention(const Tensor& x, const AttentionParams& p);
/// Attention among the n frames at each spatial location independently,
/// after adding frame_position_encoding (skipped when `positional` is false).
Tensor temporal_attention(const Tensor& x, const AttentionParams& p, bool positional = true);
/// Every visual token attends over the rows of `text` [m x d_model].
/// Throws EmptyConditioning when m == 0.
Tensor cross_modal_attention(const Tensor& x, const Tensor& text, const AttentionParams& p);
/// alpha sa + beta ta + gamma cma.
Tensor tsam_combine(const Tensor& sa, const Tensor& ta, const Tensor& cma, const TsamWeights& w);

struct TsamForward {
  Tensor sa, ta, cma, out;
};
TsamForward tsam_forward(const Tensor& x, const Tensor& text, const AttentionParams& p, const TsamWeights& w);

struct TsamGrads {
  Tensor dx;
  AttentionParams dparams;
  std::array<double, 3> dlogits{};
};
/// Gradient of <upstream, tsam_forward(x, text, p, w).out>.
TsamGrads tsam_backward(const Tensor& x, const Tensor& text, const AttentionParams& p, const TsamWeights& w,
                        const TsamForward& fwd, const Tensor& upstream);

}  // namespace movai
