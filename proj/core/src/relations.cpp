#include "movai/relations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "movai/error.hpp"
#include "movai/random.hpp"

namespace movai {
namespace {

constexpr std::size_t kD = kEmbeddingDim;

double hashed_unit(std::uint64_t seed, std::size_t i) {
  // Top 53 bits mapped to [-1, 1).
  return static_cast<double>(mix64(seed + i) >> 11) * 0x1.0p-52 - 1.0;
}

// Orthonormal basis of R^32 (columns), modified Gram-Schmidt over hashed
// vectors. Columns 0..2 span the color subspace.
const Tensor& orthonormal_basis() {
  static const Tensor basis = [] {
    Tensor b({kD, kD});
    std::vector<std::array<double, kD>> cols;
    std::uint64_t seed = 0x6d6f7661692d6273ULL;
    for (std::size_t c = 0; cols.size() < kD; ++c) {
      std::array<double, kD> v{};
      for (std::size_t i = 0; i < kD; ++i) v[i] = hashed_unit(mix64(seed + c), i);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& u : cols) {
          double dot = 0.0;
          for (std::size_t i = 0; i < kD; ++i) dot += u[i] * v[i];
          for (std::size_t i = 0; i < kD; ++i) v[i] -= dot * u[i];
        }
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-6) continue;
      for (double& x : v) x /= norm;
      cols.push_back(v);
    }
    for (std::size_t c = 0; c < kD; ++c)
      for (std::size_t i = 0; i < kD; ++i) b.at(i, c) = cols[c][i];
    return b;
  }();
  return basis;
}

}  // namespace

const Tensor& color_basis() {
  static const Tensor p = [] {
    const Tensor& b = orthonormal_basis();
    Tensor out({kD, 3});
    for (std::size_t i = 0; i < kD; ++i)
      for (std::size_t c = 0; c < 3; ++c) out.at(i, c) = b.at(i, c);
    return out;
  }();
  return p;
}

const Tensor& mixing_matrix() {
  static const Tensor m = [] {
    // Rotations with rational cosines and sines (Pythagorean triples) so the
    // matrix needs no transcendental functions.
    constexpr std::array<std::array<double, 3>, 14> kTriples{{{3, 4, 5},
                                                               {5, 12, 13},
                                                               {8, 15, 17},
                                                               {7, 24, 25},
                                                               {20, 21, 29},
                                                               {12, 35, 37},
                                                               {9, 40, 41},
                                                               {28, 45, 53},
                                                               {11, 60, 61},
                                                               {33, 56, 65},
                                                               {16, 63, 65},
                                                               {48, 55, 73},
                                                               {13, 84, 85},
                                                               {36, 77, 85}}};
    Tensor core = Tensor::identity(kD);
    for (std::size_t k = 0; k < kTriples.size(); ++k) {
      const std::size_t i = 3 + 2 * k, j = i + 1;
      const double c = kTriples[k][0] / kTriples[k][2];
      const double s = kTriples[k][1] / kTriples[k][2];
      core.at(i, i) = c;
      core.at(i, j) = -s;
      core.at(j, i) = s;
      core.at(j, j) = c;
    }
    const Tensor& b = orthonormal_basis();
    return matmul(matmul(b, core), transpose(b));
  }();
  return m;
}

std::vector<double> initial_embedding(const Entity& e) {
  std::uint64_t seed = fnv1a(e.cls.data(), e.cls.size());
  for (const auto& a : e.attributes) {
    seed = fnv1a("|", 1, seed);
    seed = fnv1a(a.word.data(), a.word.size(), seed);
  }
  std::vector<double> h(kD);
  for (std::size_t i = 0; i < kD; ++i) h[i] = hashed_unit(seed, i);
  const Tensor& p = color_basis();
  // Remove the color-span component, then normalize.
  for (std::size_t c = 0; c < 3; ++c) {
    double dot = 0.0;
    for (std::size_t i = 0; i < kD; ++i) dot += p.at(i, c) * h[i];
    for (std::size_t i = 0; i < kD; ++i) h[i] -= dot * p.at(i, c);
  }
  double norm = 0.0;
  for (double x : h) norm += x * x;
  norm = std::sqrt(norm);
  std::vector<double> out(kD);
  for (std::size_t i = 0; i < kD; ++i) {
    double color = 0.0;
    for (std::size_t c = 0; c < 3; ++c) color += p.at(i, c) * e.color[c];
    out[i] = color + h[i] / norm;
  }
  return out;
}

std::vector<double> RelationFeatures::row(std::size_t i) const {
  return {embeddings.data() + i * kD, embeddings.data() + (i + 1) * kD};
}

RelationFeatures build_relations(const SceneGraph& graph, int rounds) {
  if (rounds < 0) throw Error("rounds must be non-negative");
  const std::size_t n = graph.objects.size();
  RelationFeatures out;
  out.embeddings = Tensor({n, kD});
  std::vector<std::set<std::size_t>> neighbors(n);
  auto index_of = [&](int id) -> std::size_t {
    for (std::size_t i = 0; i < n; ++i)
      if (graph.objects[i].id == id) return i;
    throw Error("relation references unknown entity " + std::to_string(id));
  };
  for (std::size_t i = 0; i < n; ++i) {
    out.ids.push_back(graph.objects[i].id);
    const auto e = initial_embedding(graph.objects[i]);
    std::copy(e.begin(), e.end(), out.embeddings.data() + i * kD);
  }
  for (const auto& r : graph.relations) {
    const std::size_t s = index_of(r.subject), o = index_of(r.object);
    neighbors[s].insert(o);
    neighbors[o].insert(s);
  }
  // A = (I + M) / 4
  Tensor a = mixing_matrix();
  for (double& x : a.values()) x *= 0.25;
  for (std::size_t i = 0; i < kD; ++i) a.at(i, i) += 0.25;

  Tensor& e = out.embeddings;
  for (int round = 0; round < rounds; ++round) {
    Tensor next = e;
    for (std::size_t i = 0; i < n; ++i) {
      if (neighbors[i].empty()) continue;
      std::array<double, kD> delta{};
      for (std::size_t j : neighbors[i])
        for (std::size_t d = 0; d < kD; ++d) delta[d] += e.at(j, d);
      const double inv = 1.0 / static_cast<double>(neighbors[i].size());
      for (std::size_t d = 0; d < kD; ++d) delta[d] = delta[d] * inv - e.at(i, d);
      for (std::size_t r = 0; r < kD; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < kD; ++c) acc += a.at(r, c) * delta[c];
        next.at(i, r) += acc;
      }
    }
    e = std::move(next);
  }
  return out;
}

}  // namespace movai
