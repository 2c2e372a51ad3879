#include "movai/layout.hpp"

#include <algorithm>
#include <cmath>

#include "movai/error.hpp"

namespace movai {

Point Layout::at(int id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return positions[i];
  throw Error("entity " + std::to_string(id) + " not in layout");
}

double constraint_residual(ConstraintKind kind, Point s, Point o) {
  switch (kind) {
    case ConstraintKind::On:
      return std::max(std::abs(s.x - o.x), std::abs(s.y - (o.y - kLayoutGap)));
    case ConstraintKind::Under:
      return std::max(std::abs(s.x - o.x), std::abs(s.y - (o.y + kLayoutGap)));
    case ConstraintKind::LeftOf:
      return std::abs(s.x - (o.x - kLayoutGap));
    case ConstraintKind::RightOf:
      return std::abs(s.x - (o.x + kLayoutGap));
    case ConstraintKind::Across:
    case ConstraintKind::In:
    case ConstraintKind::Near: {
      const double d = std::hypot(s.x - o.x, s.y - o.y);
      return std::max({0.0, kBandMin - d, d - kBandMax});
    }
  }
  return 0.0;
}

namespace {

Point clamp(Point p) {
  return {std::clamp(p.x, kLayoutMin, kLayoutMax), std::clamp(p.y, kLayoutMin, kLayoutMax)};
}

// Moves s and o by -corr/2 and +corr/2 where corr is the offset of s from its
// target relative to o.
void project(ConstraintKind kind, Point& s, Point& o) {
  double cx = 0.0, cy = 0.0;
  switch (kind) {
    case ConstraintKind::On:
      cx = s.x - o.x;
      cy = s.y - (o.y - kLayoutGap);
      break;
    case ConstraintKind::Under:
      cx = s.x - o.x;
      cy = s.y - (o.y + kLayoutGap);
      break;
    case ConstraintKind::LeftOf:
      cx = s.x - (o.x - kLayoutGap);
      break;
    case ConstraintKind::RightOf:
      cx = s.x - (o.x + kLayoutGap);
      break;
    case ConstraintKind::Across:
    case ConstraintKind::In:
    case ConstraintKind::Near: {
      double dx = s.x - o.x, dy = s.y - o.y;
      double d = std::hypot(dx, dy);
      if (d == 0.0) {
        dx = 1.0;
        dy = 0.0;
      } else {
        dx /= d;
        dy /= d;
      }
      const double target = std::clamp(d, kBandMin, kBandMax);
      cx = (d - target) * dx;
      cy = (d - target) * dy;
      break;
    }
  }
  s = clamp({s.x - 0.5 * cx, s.y - 0.5 * cy});
  o = clamp({o.x + 0.5 * cx, o.y + 0.5 * cy});
}

}  // namespace

Layout solve_layout(const SceneGraph& graph) {
  const std::size_t n = graph.objects.size();
  Layout out;
  for (std::size_t i = 0; i < n; ++i) {
    out.ids.push_back(graph.objects[i].id);
    out.positions.push_back({static_cast<double>(i + 1) / static_cast<double>(n + 1), 0.5});
  }
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (const auto& r : graph.relations) {
    auto idx = [&](int id) {
      for (std::size_t i = 0; i < n; ++i)
        if (out.ids[i] == id) return i;
      throw Error("relation references unknown entity " + std::to_string(id));
    };
    ends.emplace_back(idx(r.subject), idx(r.object));
  }
  while (out.iterations < kLayoutMaxIterations && !ends.empty()) {
    const auto before = out.positions;
    for (std::size_t r = 0; r < ends.size(); ++r)
      project(graph.relations[r].constraint, out.positions[ends[r].first], out.positions[ends[r].second]);
    ++out.iterations;
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      moved = std::max(moved, std::hypot(out.positions[i].x - before[i].x, out.positions[i].y - before[i].y));
    if (moved < kLayoutMoveTolerance) break;
  }
  for (std::size_t r = 0; r < ends.size(); ++r) {
    const double res =
        constraint_residual(graph.relations[r].constraint, out.positions[ends[r].first], out.positions[ends[r].second]);
    out.max_residual = std::max(out.max_residual, res);
    if (res > kLayoutResidualTolerance) throw LayoutUnsatisfiable(res, r);
  }
  return out;
}

}  // namespace movai
