#include "movai/objective.hpp"

#include <cmath>

#include "movai/error.hpp"

namespace movai {

void LossWeights::validate() const {
  if (!(lambda_temporal >= 0.0) || !(lambda_semantic >= 0.0) || !(lambda_adversarial >= 0.0))
    throw ConfigError("loss weights must be non-negative");
  if (lambda_adversarial != 0.0) throw ConfigError("adversarial loss is not supported; lambda_adversarial must be 0");
}

namespace {

void require_same(const VideoTensor& a, const VideoTensor& b) {
  if (!a.same_shape(b)) throw ShapeMismatch("videos differ in shape");
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double recon_loss(const VideoTensor& v, const VideoTensor& target) {
  require_same(v, target);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(v.size());
}

VideoTensor recon_loss_gradient(const VideoTensor& v, const VideoTensor& target) {
  require_same(v, target);
  VideoTensor g = v;
  const double scale = 2.0 / static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) g[i] = scale * (v[i] - target[i]);
  return g;
}

double temporal_loss(const VideoTensor& v) {
  const std::size_t n = v.frames();
  if (n < 3) return 0.0;
  const std::size_t fs = v.frame_size();
  double s = 0.0;
  for (std::size_t t = 1; t + 1 < n; ++t) {
    for (std::size_t i = 0; i < fs; ++i) {
      const double a = v[(t + 1) * fs + i] - 2.0 * v[t * fs + i] + v[(t - 1) * fs + i];
      s += a * a;
    }
  }
  return s / static_cast<double>((n - 2) * fs);
}

VideoTensor temporal_loss_gradient(const VideoTensor& v) {
  VideoTensor g(v.frames(), v.height(), v.width(), v.channels());
  const std::size_t n = v.frames();
  if (n < 3) return g;
  const std::size_t fs = v.frame_size();
  const double scale = 2.0 / static_cast<double>((n - 2) * fs);
  for (std::size_t t = 1; t + 1 < n; ++t) {
    for (std::size_t i = 0; i < fs; ++i) {
      const double a = scale * (v[(t + 1) * fs + i] - 2.0 * v[t * fs + i] + v[(t - 1) * fs + i]);
      g[(t + 1) * fs + i] += a;
      g[t * fs + i] -= 2.0 * a;
      g[(t - 1) * fs + i] += a;
    }
  }
  return g;
}

double semantic_loss(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("embedding dimensions differ");
  const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  return 1.0 - dot(a, b) / (na * nb);
}

std::vector<double> semantic_loss_gradient(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("embedding dimensions differ");
  const double aa = dot(a, a), ab = dot(a, b);
  const double na = std::sqrt(aa), nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  // d/da [-(a.b)/(|a||b|)] = -b/(|a||b|) + (a.b) a / (|a|^3 |b|)
  std::vector<double> g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = -b[i] / (na * nb) + ab * a[i] / (aa * na * nb);
  return g;
}

std::vector<double> video_embedding(const VideoTensor& v) {
  const std::size_t c = v.channels();
  if (c != 3) throw ShapeMismatch("video embedding needs 3 channels");
  std::vector<double> mean(c, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) mean[i % c] += v[i];
  const double count = static_cast<double>(v.size() / c);
  for (double& m : mean) m /= count;
  const Tensor& p = color_basis();
  std::vector<double> out(p.rows(), 0.0);
  for (std::size_t r = 0; r < p.rows(); ++r)
    for (std::size_t k = 0; k < c; ++k) out[r] += p.at(r, k) * mean[k];
  return out;
}

std::vector<double> graph_embedding(const RelationFeatures& f) {
  const std::size_t m = f.embeddings.rows(), d = f.embeddings.cols();
  if (m == 0) throw EmptyConditioning();
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) out[j] += f.embeddings.at(i, j);
  for (double& x : out) x /= static_cast<double>(m);
  return out;
}

CompositeResult composite_loss(const VideoTensor& v, const VideoTensor& target, const std::vector<double>& graph_emb,
                               const LossWeights& w) {
  w.validate();
  CompositeResult r;
  r.loss.recon = recon_loss(v, target);
  r.loss.temporal = temporal_loss(v);
  const auto vemb = video_embedding(v);
  r.loss.semantic = semantic_loss(vemb, graph_emb);
  r.loss.composite = r.loss.recon + w.lambda_temporal * r.loss.temporal + w.lambda_semantic * r.loss.semantic;

  r.gradient = recon_loss_gradient(v, target);
  if (w.lambda_temporal != 0.0) {
    const VideoTensor gt = temporal_loss_gradient(v);
    for (std::size_t i = 0; i < v.size(); ++i) r.gradient[i] += w.lambda_temporal * gt[i];
  }
  if (w.lambda_semantic != 0.0) {
    const auto gs = semantic_loss_gradient(vemb, graph_emb);
    const Tensor& p = color_basis();
    double dmean[3] = {0.0, 0.0, 0.0};
    for (std::size_t r2 = 0; r2 < p.rows(); ++r2)
      for (std::size_t k = 0; k < 3; ++k) dmean[k] += p.at(r2, k) * gs[r2];
    const double count = static_cast<double>(v.size() / 3);
    for (std::size_t i = 0; i < v.size(); ++i) r.gradient[i] += w.lambda_semantic * dmean[i % 3] / count;
  }
  return r;
}

}  // namespace movai
