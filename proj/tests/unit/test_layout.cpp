#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "movai/error.hpp"
#include "movai/layout.hpp"
#include "movai/parser.hpp"
#include "movai/scene_graph.hpp"
#include "test_support.hpp"

using namespace movai;

namespace {

// Residual re-derived from the constraint definitions, independent of the
// library's evaluator: gap 0.15 for on/under/left/right, distance band
// [0.1, 0.3] for across/in/near, y grows downward.
double reference_residual(ConstraintKind k, Point s, Point o) {
  switch (k) {
    case ConstraintKind::On:
      return std::max(std::fabs(o.x - s.x), std::fabs((o.y - s.y) - 0.15));
    case ConstraintKind::Under:
      return std::max(std::fabs(o.x - s.x), std::fabs((s.y - o.y) - 0.15));
    case ConstraintKind::LeftOf:
      return std::fabs((o.x - s.x) - 0.15);
    case ConstraintKind::RightOf:
      return std::fabs((s.x - o.x) - 0.15);
    default: {
      const double d = std::sqrt((s.x - o.x) * (s.x - o.x) + (s.y - o.y) * (s.y - o.y));
      return d < 0.1 ? 0.1 - d : d > 0.3 ? d - 0.3 : 0.0;
    }
  }
}

SceneGraph two(ConstraintKind k) {
  SceneGraph g;
  g.objects.resize(2);
  g.objects[1].id = 1;
  g.objects[0].cls = "a";
  g.objects[1].cls = "b";
  g.relations = {{0, "r", k, 1}};
  return g;
}

}  // namespace

TEST_CASE("ball on table") {
  const SceneGraph g = parse_prompt("a ball rolling on a table", movai::testing::default_lexicon());
  const Layout l = solve_layout(g);
  const Point ball = l.at(0), table = l.at(1);
  CHECK(ball.y < table.y);
  CHECK(std::fabs(ball.x - table.x) < 1e-3);
  CHECK(reference_residual(ConstraintKind::On, ball, table) < 1e-3);
}

TEST_CASE("a lone entity sits at the seed") {
  SceneGraph g;
  g.objects.resize(1);
  g.objects[0].cls = "ball";
  const Layout l = solve_layout(g);
  CHECK(l.at(0) == Point{0.5, 0.5});
  CHECK(l.iterations == 0);
}

TEST_CASE("contradictory constraints are unsatisfiable") {
  SceneGraph g = two(ConstraintKind::LeftOf);
  g.relations.push_back({1, "left", ConstraintKind::LeftOf, 0});
  CHECK_THROWS_AS(solve_layout(g), LayoutUnsatisfiable);
}

TEST_CASE("every constraint kind is satisfied from the default seed") {
  for (auto k : {ConstraintKind::On, ConstraintKind::Under, ConstraintKind::LeftOf, ConstraintKind::RightOf,
                 ConstraintKind::Across, ConstraintKind::In, ConstraintKind::Near}) {
    CAPTURE(to_string(k));
    const SceneGraph g = two(k);
    const Layout l = solve_layout(g);
    CHECK(reference_residual(k, l.at(0), l.at(1)) < 1e-3);
    CHECK(constraint_residual(k, l.at(0), l.at(1)) == doctest::Approx(reference_residual(k, l.at(0), l.at(1))));
  }
}

TEST_CASE("library residual matches the reference on random points") {
  CounterRng rng(11, 0);
  for (int i = 0; i < 500; ++i) {
    const Point s{rng.uniform(), rng.uniform()}, o{rng.uniform(), rng.uniform()};
    const auto k = static_cast<ConstraintKind>(rng.below(7));
    CHECK(constraint_residual(k, s, o) == doctest::Approx(reference_residual(k, s, o)).epsilon(1e-12));
  }
}

TEST_CASE("property: golden corpus layouts converge and stay in bounds") {
  std::ifstream in(movai::testing::golden_dir() / "prompts.txt");
  std::string prompt;
  int count = 0;
  while (std::getline(in, prompt)) {
    CAPTURE(prompt);
    const SceneGraph g = parse_prompt(prompt, movai::testing::default_lexicon());
    const Layout l = solve_layout(g);
    CHECK(l.iterations <= kLayoutMaxIterations);
    for (const auto& r : g.relations) CHECK(reference_residual(r.constraint, l.at(r.subject), l.at(r.object)) < 1e-3);
    for (const auto& p : l.positions) {
      CHECK(p.x >= 0.05);
      CHECK(p.x <= 0.95);
      CHECK(p.y >= 0.05);
      CHECK(p.y <= 0.95);
    }
    ++count;
  }
  CHECK(count == 30);
}
