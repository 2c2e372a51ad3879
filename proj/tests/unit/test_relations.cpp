#include <cmath>

#include "doctest.h"
#include "movai/error.hpp"
#include "movai/parser.hpp"
#include "movai/relations.hpp"
#include "test_support.hpp"

using namespace movai;

namespace {

Entity entity(int id, const char* cls, Rgb color) {
  Entity e;
  e.id = id;
  e.cls = cls;
  e.color = color;
  return e;
}

double norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("color basis has orthonormal columns") {
  const Tensor g = matmul(transpose(color_basis()), color_basis());
  CHECK(movai::testing::max_abs_diff(g, Tensor::identity(3)) < 1e-14);
}

TEST_CASE("mixing matrix is orthogonal and fixes the color span") {
  const Tensor& m = mixing_matrix();
  CHECK(movai::testing::max_abs_diff(matmul(transpose(m), m), Tensor::identity(kEmbeddingDim)) < 1e-13);
  CHECK(movai::testing::max_abs_diff(matmul(m, color_basis()), color_basis()) < 1e-13);
}

TEST_CASE("initial embedding carries the color in the color span") {
  const Entity e = entity(0, "ball", {0.9, 0.2, 0.6});
  const auto emb = initial_embedding(e);
  REQUIRE(emb.size() == kEmbeddingDim);
  const Tensor& p = color_basis();
  for (std::size_t c = 0; c < 3; ++c) {
    double dot = 0;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) dot += p.at(i, c) * emb[i];
    CHECK(dot == doctest::Approx(e.color[c]).epsilon(1e-12));
  }
  CHECK(initial_embedding(e) == emb);
  CHECK(initial_embedding(entity(0, "cat", {0.9, 0.2, 0.6})) != emb);
}

TEST_CASE("zero rounds and isolated nodes keep the initialization") {
  SceneGraph g;
  g.objects = {entity(0, "cat", {1, 0.5, 0}), entity(1, "garden", {0, 0.6, 0})};
  for (int rounds : {0, 5}) {
    const auto f = build_relations(g, rounds);
    CHECK(f.row(0) == initial_embedding(g.objects[0]));
    CHECK(f.row(1) == initial_embedding(g.objects[1]));
  }
  g.relations.push_back({0, "across", ConstraintKind::Across, 1});
  const auto f0 = build_relations(g, 0);
  CHECK(f0.row(0) == initial_embedding(g.objects[0]));
}

TEST_CASE("two mutually related entities contract monotonically") {
  SceneGraph g;
  g.objects = {entity(0, "cat", {1, 0.5, 0}), entity(1, "dog", {0.3, 0.3, 0.9})};
  g.relations = {{0, "near", ConstraintKind::Near, 1}, {1, "near", ConstraintKind::Near, 0}};

  // Iterate the update rule directly: e_i += (I + M)/4 (e_j - e_i).
  std::vector<double> a = initial_embedding(g.objects[0]), b = initial_embedding(g.objects[1]);
  const Tensor& m = mixing_matrix();
  double prev = norm_diff(a, b);
  for (int round = 1; round <= 30; ++round) {
    std::vector<double> na = a, nb = b;
    for (std::size_t r = 0; r < kEmbeddingDim; ++r)
      for (std::size_t c = 0; c < kEmbeddingDim; ++c) {
        const double w = 0.25 * ((r == c ? 1.0 : 0.0) + m.at(r, c));
        na[r] += w * (b[c] - a[c]);
        nb[r] += w * (a[c] - b[c]);
      }
    a = na;
    b = nb;
    const auto f = build_relations(g, round);
    CHECK(norm_diff(f.row(0), a) < 1e-12);
    CHECK(norm_diff(f.row(1), b) < 1e-12);
    const double d = norm_diff(f.row(0), f.row(1));
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("neighbors are undirected and deduplicated") {
  SceneGraph one, two;
  one.objects = two.objects = {entity(0, "cat", {1, 0.5, 0}), entity(1, "dog", {0.3, 0.3, 0.9})};
  one.relations = {{0, "near", ConstraintKind::Near, 1}};
  two.relations = {{0, "near", ConstraintKind::Near, 1}, {1, "on", ConstraintKind::On, 0}};
  CHECK(build_relations(one, 3).embeddings == build_relations(two, 3).embeddings);
}

TEST_CASE("negative rounds are rejected") {
  SceneGraph g;
  g.objects = {entity(0, "cat", {1, 0.5, 0})};
  CHECK_THROWS_AS(build_relations(g, -1), Error);
}
