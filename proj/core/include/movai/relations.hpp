#pragma once

#include <cstddef>
#include <vector>

#include "movai/scene_graph.hpp"
#include "movai/tensor.hpp"

namespace movai {

inline constexpr std::size_t kEmbeddingDim = 32;
inline constexpr int kDefaultRelationRounds = 2;

/// Fixed 32x3 matrix with orthonormal columns. Entity colors are embedded in
/// its span, and video color statistics are projected through it, so the
/// two embeddings are directly comparable.
const Tensor& color_basis();

/// Fixed 32x32 orthogonal mixing matrix. Acts as the identity on the span of
/// color_basis() and as planar rotations (no eigenvalue -1) elsewhere.
const Tensor& mixing_matrix();

/// Initial embedding: color_basis() * color + a unit-norm hash vector of the
/// class and attribute words restricted to the complement of the color span.
std::vector<double> initial_embedding(const Entity& e);

/// Entity embeddings after message passing, one row per entity in
/// graph.objects order.
struct RelationFeatures {
  std::vector<int> ids;
  Tensor embeddings;  // objects.size() x kEmbeddingDim

  std::vector<double> row(std::size_t i) const;
};

/// Each round, synchronously for every entity i with neighborhood N(i)
/// (relation-adjacent in either direction, deduplicated):
///   m_i = mean_{j in N(i)} e_j, or e_i when N(i) is empty
///   e_i <- e_i + (I + M)/4 (m_i - e_i)
/// With two mutually related entities their difference contracts by
/// (I - M)/2 per round.
RelationFeatures build_relations(const SceneGraph& graph, int rounds = kDefaultRelationRounds);

}  // namespace movai
