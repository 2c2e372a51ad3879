#include "movai/tsam.hpp"

#include <cmath>
#include <string>

#include "movai/error.hpp"

namespace movai {
namespace {

void check_latent(const Tensor& x, std::size_t d) {
  if (x.rank() != 3 || x.dim(0) == 0 || x.dim(1) == 0 || x.dim(2) != d) {
    throw ShapeMismatch("latent video must be [n x S x " + std::to_string(d) + "]");
  }
}

void check_params(const AttentionParams& p) {
  const std::size_t d = p.d_model();
  for (const Projections* pr : {&p.spatial, &p.temporal, &p.cross}) {
    for (const Tensor* w : {&pr->wq, &pr->wk, &pr->wv}) {
      if (w->rank() != 2 || w->rows() != d || w->cols() != d) throw ShapeMismatch("projection must be d x d");
    }
  }
  if (p.heads == 0 || d % p.heads != 0) throw ShapeMismatch("d_model must be divisible by head count");
}

Tensor cols(const Tensor& m, std::size_t begin, std::size_t count) {
  Tensor out({m.rows(), count});
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out.at(r, c) = m.at(r, begin + c);
  return out;
}

void put_cols(Tensor& m, std::size_t begin, const Tensor& part) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < part.cols(); ++c) m.at(r, begin + c) = part.at(r, c);
}

// Rows of a rank-3 latent as a matrix.
Tensor frame_rows(const Tensor& x, std::size_t t) {
  const std::size_t s = x.dim(1), d = x.dim(2);
  Tensor out({s, d});
  std::copy_n(x.data() + t * s * d, s * d, out.data());
  return out;
}

Tensor location_rows(const Tensor& x, std::size_t loc) {
  const std::size_t n = x.dim(0), s = x.dim(1), d = x.dim(2);
  Tensor out({n, d});
  for (std::size_t t = 0; t < n; ++t) std::copy_n(x.data() + (t * s + loc) * d, d, out.data() + t * d);
  return out;
}

void add_projections(Projections& acc, const Projections& g) {
  axpy(acc.wq, 1.0, g.wq);
  axpy(acc.wk, 1.0, g.wk);
  axpy(acc.wv, 1.0, g.wv);
}

Projections zeros_like(const Projections& p) {
  return {Tensor(p.wq.shape()), Tensor(p.wk.shape()), Tensor(p.wv.shape())};
}

}  // namespace

std::array<double, 3> TsamWeights::weights() const {
  const Tensor s = softmax(Tensor({3}, {logits[0], logits[1], logits[2]}), 0);
  return {s[0], s[1], s[2]};
}

Tensor frame_position_encoding(std::size_t frames, std::size_t d) {
  Tensor pe({frames, d});
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < d; ++i) {
      const double expo = static_cast<double>(i - i % 2) / static_cast<double>(d);
      const double angle = static_cast<double>(t) / std::pow(10000.0, expo);
      pe.at(t, i) = i % 2 == 0 ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

Tensor multi_head_attention(const Tensor& queries, const Tensor& context, const Projections& p, std::size_t heads) {
  const Tensor q = matmul(queries, p.wq);
  const Tensor k = matmul(context, p.wk);
  const Tensor v = matmul(context, p.wv);
  const std::size_t dk = q.cols() / heads;
  Tensor out({queries.rows(), v.cols()});
  for (std::size_t h = 0; h < heads; ++h) {
    const auto r = scaled_dot_attention(cols(q, h * dk, dk), cols(k, h * dk, dk), cols(v, h * dk, dk));
    put_cols(out, h * dk, r.output);
  }
  return out;
}

MultiHeadGrads multi_head_attention_backward(const Tensor& queries, const Tensor& context, const Projections& p,
                                             std::size_t heads, const Tensor& upstream) {
  const Tensor q = matmul(queries, p.wq);
  const Tensor k = matmul(context, p.wk);
  const Tensor v = matmul(context, p.wv);
  const std::size_t dk = q.cols() / heads;
  Tensor dq(q.shape()), dk_all(k.shape()), dv(v.shape());
  for (std::size_t h = 0; h < heads; ++h) {
    const auto g = attention_backward(cols(q, h * dk, dk), cols(k, h * dk, dk), cols(v, h * dk, dk),
                                      cols(upstream, h * dk, dk));
    put_cols(dq, h * dk, g.dq);
    put_cols(dk_all, h * dk, g.dk);
    put_cols(dv, h * dk, g.dv);
  }
  MultiHeadGrads out;
  out.dweights.wq = matmul(transpose(queries), dq);
  out.dweights.wk = matmul(transpose(context), dk_all);
  out.dweights.wv = matmul(transpose(context), dv);
  out.dqueries = matmul(dq, transpose(p.wq));
  out.dcontext = matmul(dk_all, transpose(p.wk));
  axpy(out.dcontext, 1.0, matmul(dv, transpose(p.wv)));
  return out;
}

Tensor spatial_attention(const Tensor& x, const AttentionParams& p) {
  check_params(p);
  check_latent(x, p.d_model());
  const std::size_t n = x.dim(0), s = x.dim(1), d = x.dim(2);
  Tensor out(x.shape());
  for (std::size_t t = 0; t < n; ++t) {
    const Tensor f = frame_rows(x, t);
    const Tensor y = multi_head_attention(f, f, p.spatial, p.heads);
    std::copy_n(y.data(), s * d, out.data() + t * s * d);
  }
  return out;
}

Tensor temporal_attention(const Tensor& x, const AttentionParams& p, bool positional) {
  check_params(p);
  check_latent(x, p.d_model());
  const std::size_t n = x.dim(0), s = x.dim(1), d = x.dim(2);
  const Tensor pe = frame_position_encoding(n, d);
  Tensor out(x.shape());
  for (std::size_t loc = 0; loc < s; ++loc) {
    Tensor seq = location_rows(x, loc);
    if (positional) axpy(seq, 1.0, pe);
    const Tensor y = multi_head_attention(seq, seq, p.temporal, p.heads);
    for (std::size_t t = 0; t < n; ++t) std::copy_n(y.data() + t * d, d, out.data() + (t * s + loc) * d);
  }
  return out;
}

Tensor cross_modal_attention(const Tensor& x, const Tensor& text, const AttentionParams& p) {
  check_params(p);
  check_latent(x, p.d_model());
  if (text.rank() != 2 || text.rows() == 0) throw EmptyConditioning();
  if (text.cols() != p.d_model()) throw ShapeMismatch("text embeddings must have d_model columns");
  const Tensor flat({x.dim(0) * x.dim(1), x.dim(2)}, std::vector<double>(x.values().begin(), x.values().end()));
  const Tensor y = multi_head_attention(flat, text, p.cross, p.heads);
  return Tensor(x.shape(), std::vector<double>(y.values().begin(), y.values().end()));
}

Tensor tsam_combine(const Tensor& sa, const Tensor& ta, const Tensor& cma, const TsamWeights& w) {
  if (sa.shape() != ta.shape() || sa.shape() != cma.shape()) throw ShapeMismatch("TSAM branch shapes differ");
  const auto [a, b, g] = w.weights();
  Tensor out(sa.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * sa[i] + b * ta[i] + g * cma[i];
  return out;
}

TsamForward tsam_forward(const Tensor& x, const Tensor& text, const AttentionParams& p, const TsamWeights& w) {
  TsamForward f;
  f.sa = spatial_attention(x, p);
  f.ta = temporal_attention(x, p);
  f.cma = cross_modal_attention(x, text, p);
  f.out = tsam_combine(f.sa, f.ta, f.cma, w);
  return f;
}

TsamGrads tsam_backward(const Tensor& x, const Tensor& text, const AttentionParams& p, const TsamWeights& w,
                        const TsamForward& fwd, const Tensor& upstream) {
  if (upstream.shape() != x.shape()) throw ShapeMismatch("TSAM upstream gradient shape");
  const std::size_t n = x.dim(0), s = x.dim(1), d = x.dim(2);
  const auto wts = w.weights();

  TsamGrads g;
  g.dx = Tensor(x.shape());
  g.dparams.heads = p.heads;
  g.dparams.spatial = zeros_like(p.spatial);
  g.dparams.temporal = zeros_like(p.temporal);
  g.dparams.cross = zeros_like(p.cross);

  // Combination: d out / d logit_i = w_i (<u, branch_i> - sum_j w_j <u, branch_j>).
  std::array<double, 3> dot{};
  const Tensor* branches[3] = {&fwd.sa, &fwd.ta, &fwd.cma};
  for (int b = 0; b < 3; ++b)
    for (std::size_t i = 0; i < upstream.size(); ++i) dot[b] += upstream[i] * (*branches[b])[i];
  const double mean = wts[0] * dot[0] + wts[1] * dot[1] + wts[2] * dot[2];
  for (int b = 0; b < 3; ++b) g.dlogits[b] = wts[b] * (dot[b] - mean);

  // Spatial branch.
  for (std::size_t t = 0; t < n; ++t) {
    const Tensor f = frame_rows(x, t);
    Tensor up = frame_rows(upstream, t);
    for (double& v : up.values()) v *= wts[0];
    const auto mg = multi_head_attention_backward(f, f, p.spatial, p.heads, up);
    add_projections(g.dparams.spatial, mg.dweights);
    double* dst = g.dx.data() + t * s * d;
    for (std::size_t i = 0; i < s * d; ++i) dst[i] += mg.dqueries[i] + mg.dcontext[i];
  }
  // Temporal branch; the position encoding is additive so passes through.
  const Tensor pe = frame_position_encoding(n, d);
  for (std::size_t loc = 0; loc < s; ++loc) {
    Tensor seq = location_rows(x, loc);
    axpy(seq, 1.0, pe);
    Tensor up = location_rows(upstream, loc);
    for (double& v : up.values()) v *= wts[1];
    const auto mg = multi_head_attention_backward(seq, seq, p.temporal, p.heads, up);
    add_projections(g.dparams.temporal, mg.dweights);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t c = 0; c < d; ++c)
        g.dx[(t * s + loc) * d + c] += mg.dqueries.at(t, c) + mg.dcontext.at(t, c);
  }
  // Cross-modal branch; text embeddings are constants.
  {
    const Tensor flat({n * s, d}, std::vector<double>(x.values().begin(), x.values().end()));
    Tensor up({n * s, d}, std::vector<double>(upstream.values().begin(), upstream.values().end()));
    for (double& v : up.values()) v *= wts[2];
    const auto mg = multi_head_attention_backward(flat, text, p.cross, p.heads, up);
    add_projections(g.dparams.cross, mg.dweights);
    for (std::size_t i = 0; i < g.dx.size(); ++i) g.dx[i] += mg.dqueries[i];
  }
  return g;
}

}  // namespace movai
