#include "movai/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "movai/error.hpp"
#include "movai/objective.hpp"
#include "movai/relations.hpp"

namespace movai {

std::vector<FeatureVector> extract_features(const VideoTensor& v) {
  if (v.channels() != 3) throw ShapeMismatch("features need 3 channels");
  const std::size_t h = v.height(), w = v.width(), pixels = h * w;
  const double inv_pixels = 1.0 / static_cast<double>(pixels);
  const double bin_width = std::sqrt(2.0) / static_cast<double>(kGradientBins);
  std::vector<FeatureVector> out;
  std::vector<double> gray(pixels);
  for (std::size_t t = 0; t < v.frames(); ++t) {
    FeatureVector f{};
    for (std::size_t c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) sum += v.at(t, y, x, c);
      const double mean = sum * inv_pixels;
      double var = 0.0;
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
          const double d = v.at(t, y, x, c) - mean;
          var += d * d;
        }
      f[c] = mean;
      f[3 + c] = std::sqrt(var * inv_pixels);
    }
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        gray[y * w + x] = (v.at(t, y, x, 0) + v.at(t, y, x, 1) + v.at(t, y, x, 2)) / 3.0;
    // Forward differences, zero at the last row/column.
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        const double gx = x + 1 < w ? gray[y * w + x + 1] - gray[y * w + x] : 0.0;
        const double gy = y + 1 < h ? gray[(y + 1) * w + x] - gray[y * w + x] : 0.0;
        const double mag = std::sqrt(gx * gx + gy * gy);
        const auto bin = std::min(kGradientBins - 1, static_cast<std::size_t>(mag / bin_width));
        f[6 + bin] += inv_pixels;
      }
    if (t > 0) {
      double diff = 0.0;
      const std::size_t fs = v.frame_size();
      for (std::size_t i = 0; i < fs; ++i) diff += std::abs(v[t * fs + i] - v[(t - 1) * fs + i]);
      f[14] = diff / static_cast<double>(fs);
    }
    out.push_back(f);
  }
  return out;
}

FeatureVector video_feature(const VideoTensor& v) {
  const auto frames = extract_features(v);
  FeatureVector mean{};
  for (const auto& f : frames)
    for (std::size_t i = 0; i < kFeatureDim; ++i) mean[i] += f[i];
  for (double& m : mean) m /= static_cast<double>(frames.size());
  return mean;
}

GaussianSummary summarize(const std::vector<std::vector<double>>& samples) {
  if (samples.size() < 2) throw InsufficientSamples(samples.size(), 2);
  const std::size_t d = samples.front().size(), n = samples.size();
  for (const auto& s : samples)
    if (s.size() != d) throw DimensionMismatch("samples differ in dimension");
  GaussianSummary g;
  g.mean.assign(d, 0.0);
  for (const auto& s : samples)
    for (std::size_t i = 0; i < d; ++i) g.mean[i] += s[i];
  for (double& m : g.mean) m /= static_cast<double>(n);
  g.covariance.assign(d * d, 0.0);
  for (const auto& s : samples)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) g.covariance[i * d + j] += (s[i] - g.mean[i]) * (s[j] - g.mean[j]);
  for (double& c : g.covariance) c /= static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i) g.covariance[i * d + i] += kCovarianceRegularizer;
  return g;
}

GaussianSummary summarize(const std::vector<FeatureVector>& samples) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.emplace_back(s.begin(), s.end());
  return summarize(rows);
}

namespace {

Eigen::MatrixXd to_matrix(const GaussianSummary& g) {
  const auto d = static_cast<Eigen::Index>(g.dim());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = g.cov(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double frechet_distance(const GaussianSummary& a, const GaussianSummary& b) {
  if (a.dim() != b.dim() || a.covariance.size() != a.dim() * a.dim() || b.covariance.size() != b.dim() * b.dim())
    throw DimensionMismatch("Gaussian summaries differ in dimension");
  double mean_term = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a.mean[i] - b.mean[i];
    mean_term += d * d;
  }
  const Eigen::MatrixXd sa = to_matrix(a), sb = to_matrix(b);
  const Eigen::MatrixXd ra = psd_sqrt(sa);
  Eigen::MatrixXd inner = ra * sb * ra;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inner, Eigen::EigenvaluesOnly);
  const double cross = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double d2 = mean_term + sa.trace() + sb.trace() - 2.0 * cross;
  return std::max(0.0, d2);
}

double alignment_score(const SceneGraph& graph, const VideoTensor& v) {
  return 1.0 - semantic_loss(graph_embedding(build_relations(graph)), video_embedding(v));
}

double temporal_consistency(const VideoTensor& v) {
  if (v.frames() < 2) return 1.0;
  const std::size_t fs = v.frame_size();
  double s = 0.0;
  for (std::size_t t = 1; t < v.frames(); ++t)
    for (std::size_t i = 0; i < fs; ++i) {
      const double d = v[t * fs + i] - v[(t - 1) * fs + i];
      s += d * d;
    }
  return 1.0 / (1.0 + s / static_cast<double>((v.frames() - 1) * fs));
}

}  // namespace movai
