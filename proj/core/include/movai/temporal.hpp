#pragma once

#include "movai/layout.hpp"
#include "movai/scene_graph.hpp"

namespace movai {

inline constexpr double kSpinRadius = 0.1;

/// Fills graph.annotations with one per-frame trajectory per entity, starting
/// from the solved layout. With speed v (scene units per frame, modifiers
/// applied) and start (x0, y0):
///   linear  x_t = x0 + v t
///   fall    y_t = y0 + v t^2 / 2            (v read as units per frame^2)
///   spin    (x0, y0) + r (cos(v t / r), sin(v t / r)),  r = 0.1
/// Ground entities stay at their start. Positions are clamped to [0,1]^2.
/// Speeds are per frame, so `fps` only has to be positive.
/// Throws MissingVerb for an actor without an action.
SceneGraph annotate_temporal(const SceneGraph& graph, const Layout& layout, int frames, double fps = 8.0);

/// solve_layout followed by annotate_temporal.
SceneGraph annotate(const SceneGraph& graph, int frames, double fps = 8.0);

}  // namespace movai
