#include <cmath>

#include "doctest.h"
#include "movai/error.hpp"
#include "movai/parser.hpp"
#include "movai/temporal.hpp"
#include "test_support.hpp"

using namespace movai;

namespace {

Layout at(std::vector<int> ids, std::vector<Point> pts) {
  Layout l;
  l.ids = std::move(ids);
  l.positions = std::move(pts);
  return l;
}

}  // namespace

TEST_CASE("constant-velocity walk") {
  const SceneGraph g = parse_prompt("a cat walking across a garden", movai::testing::default_lexicon());
  const SceneGraph a = annotate_temporal(g, at({0, 1}, {{0.2, 0.5}, {0.6, 0.5}}), 8);
  const auto* cat = a.annotation_for(0);
  REQUIRE(cat != nullptr);
  REQUIRE(cat->duration() == 8);
  for (int t = 0; t < 8; ++t) {
    CHECK(cat->positions[static_cast<std::size_t>(t)].x == doctest::Approx(0.2 + 0.01 * t).epsilon(1e-15));
    CHECK(cat->positions[static_cast<std::size_t>(t)].y == 0.5);
  }
  const auto* garden = a.annotation_for(1);
  REQUIRE(garden != nullptr);
  CHECK(garden->trajectory == Trajectory::Static);
  for (const auto& p : garden->positions) CHECK(p == Point{0.6, 0.5});
}

TEST_CASE("a modifier scales the per-frame step") {
  const Lexicon& lex = movai::testing::default_lexicon();
  const SceneGraph slow = parse_prompt("a cat walking", lex);
  const SceneGraph fast = parse_prompt("a cat walking quickly", lex);
  const Layout l = at({0}, {{0.2, 0.5}});
  const auto ps = annotate_temporal(slow, l, 8).annotations[0].positions;
  const auto pf = annotate_temporal(fast, l, 8).annotations[0].positions;
  const double speed = lex.verb("walk").speed * lex.modifier("quickly");
  for (std::size_t t = 1; t < 8; ++t) {
    CHECK(pf[t].x - pf[t - 1].x == doctest::Approx(2.0 * (ps[t].x - ps[t - 1].x)).epsilon(1e-9));
    CHECK(pf[t].x == doctest::Approx(0.2 + speed * static_cast<double>(t)).epsilon(1e-15));
  }
}

TEST_CASE("fall accelerates downward and spin orbits its start") {
  const Lexicon& lex = movai::testing::default_lexicon();
  const auto fall = annotate_temporal(parse_prompt("a leaf falling", lex), at({0}, {{0.5, 0.2}}), 8);
  const auto& pf = fall.annotations[0].positions;
  for (std::size_t t = 2; t < 8; ++t) {
    const double a = pf[t].y - 2 * pf[t - 1].y + pf[t - 2].y;
    CHECK(a == doctest::Approx(lex.verb("fall").speed).epsilon(1e-9));
    CHECK(pf[t].x == 0.5);
  }
  const auto spin = annotate_temporal(parse_prompt("a star spinning", lex), at({0}, {{0.5, 0.5}}), 8);
  for (const auto& p : spin.annotations[0].positions)
    CHECK(std::hypot(p.x - 0.5, p.y - 0.5) == doctest::Approx(kSpinRadius).epsilon(1e-12));
}

TEST_CASE("positions are clamped to the unit square") {
  const auto a = annotate_temporal(parse_prompt("a car driving quickly", movai::testing::default_lexicon()),
                                   at({0}, {{0.9, 0.5}}), 8);
  for (const auto& p : a.annotations[0].positions) {
    CHECK(p.x <= 1.0);
    CHECK(p.x >= 0.0);
  }
  CHECK(a.annotations[0].positions.back().x == 1.0);
}

TEST_CASE("an actor without a verb is rejected") {
  const SceneGraph g = parse_prompt("a red ball on a table", movai::testing::default_lexicon());
  try {
    annotate(g, 8);
    FAIL("expected MissingVerb");
  } catch (const MissingVerb& e) {
    CHECK(e.entity() == 0);
  }
}

TEST_CASE("frame count must be positive") {
  const SceneGraph g = parse_prompt("a cat walking", movai::testing::default_lexicon());
  CHECK_THROWS_AS(annotate(g, 0), Error);
}
