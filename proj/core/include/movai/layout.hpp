#pragma once

#include <cstddef>
#include <vector>

#include "movai/scene_graph.hpp"

namespace movai {

inline constexpr double kLayoutGap = 0.15;
inline constexpr double kBandMin = 0.10;
inline constexpr double kBandMax = 0.30;
inline constexpr double kLayoutMin = 0.05;
inline constexpr double kLayoutMax = 0.95;
inline constexpr double kLayoutMoveTolerance = 1e-4;
inline constexpr double kLayoutResidualTolerance = 1e-3;
inline constexpr int kLayoutMaxIterations = 500;

struct Layout {
  std::vector<int> ids;
  std::vector<Point> positions;
  int iterations = 0;
  double max_residual = 0.0;

  /// Throws Error if `id` is not laid out.
  Point at(int id) const;
};

/// Constraint violation of `subject` relative to `object`; 0 when satisfied.
///   on:        |s.x - o.x| and |s.y - (o.y - gap)|
///   under:     |s.x - o.x| and |s.y - (o.y + gap)|
///   left_of:   |s.x - (o.x - gap)|   right_of: |s.x - (o.x + gap)|
///   across/in/near: distance outside [kBandMin, kBandMax]
/// Image coordinates: y grows downward.
double constraint_residual(ConstraintKind kind, Point subject, Point object);

/// Cyclic projection: each sweep projects every relation in order, splitting
/// the correction evenly between subject and object and clamping to
/// [0.05, 0.95]. Entity i of N starts at ((i + 1) / (N + 1), 0.5). Stops when
/// no entity moves more than 1e-4 in a sweep or after 500 sweeps; throws
/// LayoutUnsatisfiable if any residual is then above 1e-3.
Layout solve_layout(const SceneGraph& graph);

}  // namespace movai
