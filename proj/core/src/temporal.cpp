#include "movai/temporal.hpp"

#include <algorithm>
#include <cmath>

#include "movai/error.hpp"

namespace movai {

SceneGraph annotate_temporal(const SceneGraph& graph, const Layout& layout, int frames, double fps) {
  if (frames < 1) throw Error("frame count must be at least 1");
  if (!(fps > 0.0)) throw Error("fps must be positive");
  SceneGraph out = graph;
  out.annotations.clear();
  for (const auto& e : graph.objects) {
    const Point start = layout.at(e.id);
    TemporalAnnotation a;
    a.entity = e.id;
    if (e.role == Role::Actor) {
      if (!e.action) throw MissingVerb(e.id);
      a.trajectory = e.action->trajectory;
      a.speed = e.action->speed();
    }
    a.positions.reserve(static_cast<std::size_t>(frames));
    for (int t = 0; t < frames; ++t) {
      const double tt = static_cast<double>(t);
      Point p = start;
      switch (a.trajectory) {
        case Trajectory::Static:
          break;
        case Trajectory::Linear:
          p.x = start.x + a.speed * tt;
          break;
        case Trajectory::Fall:
          p.y = start.y + 0.5 * a.speed * tt * tt;
          break;
        case Trajectory::Spin: {
          const double theta = a.speed * tt / kSpinRadius;
          p.x = start.x + kSpinRadius * std::cos(theta);
          p.y = start.y + kSpinRadius * std::sin(theta);
          break;
        }
      }
      a.positions.push_back({std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)});
    }
    out.annotations.push_back(std::move(a));
  }
  return out;
}

SceneGraph annotate(const SceneGraph& graph, int frames, double fps) {
  return annotate_temporal(graph, solve_layout(graph), frames, fps);
}

}  // namespace movai
