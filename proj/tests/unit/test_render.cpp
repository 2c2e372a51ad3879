#include <cmath>
#include <cstring>

#include "doctest.h"
#include "movai/error.hpp"
#include "movai/objective.hpp"
#include "movai/parser.hpp"
#include "movai/render.hpp"
#include "movai/temporal.hpp"
#include "test_support.hpp"

using namespace movai;

namespace {

SceneGraph static_circle() {
  SceneGraph g;
  Entity e;
  e.cls = "ball";
  e.size = 0.25;
  e.color = {1.0, 0.5, 0.0};
  e.role = Role::Ground;
  g.objects = {e};
  g.annotations = {{0, Trajectory::Static, 0.0, std::vector<Point>(4, Point{0.5, 0.5})}};
  return g;
}

// Mean x of pixels whose color matches `rgb` exactly.
double centroid_x(const VideoTensor& v, std::size_t t, const Rgb& rgb) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t y = 0; y < v.height(); ++y)
    for (std::size_t x = 0; x < v.width(); ++x)
      if (v.at(t, y, x, 0) == rgb[0] && v.at(t, y, x, 1) == rgb[1] && v.at(t, y, x, 2) == rgb[2]) {
        sum += static_cast<double>(x);
        ++n;
      }
  return n ? sum / static_cast<double>(n) : -1.0;
}

std::uint64_t error_offset(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_video(bytes);
  } catch (const FormatError& e) {
    return e.location();
  }
  FAIL("expected FormatError");
  return 0;
}

}  // namespace

TEST_CASE("static centered circle") {
  const VideoTensor v = render_scene(static_circle(), 8, 8, 4);
  CHECK(temporal_loss(v) == 0.0);
  for (std::size_t t = 1; t < 4; ++t)
    for (std::size_t i = 0; i < v.frame_size(); ++i) CHECK(v[t * v.frame_size() + i] == v[i]);
  // Pixel centers (x + 0.5) / 8: those within 0.25 of the center are covered.
  CHECK(v.at(0, 3, 3, 0) == 1.0);
  CHECK(v.at(0, 4, 4, 1) == 0.5);
  CHECK(v.at(0, 0, 0, 0) == kBackground);
  CHECK(v.at(0, 3, 1, 0) == kBackground);  // (0.1875, 0.4375) lies at distance 0.319
  CHECK(v.at(0, 3, 2, 0) == 1.0);          // (0.3125, 0.4375) lies at distance 0.198
}

TEST_CASE("rects cover a square of half-extent size") {
  SceneGraph g = static_circle();
  g.objects[0].shape = Shape::Rect;
  const VideoTensor v = render_scene(g, 8, 8, 4);
  CHECK(v.at(0, 2, 2, 0) == 1.0);  // (0.3125, 0.3125): both offsets 0.1875
  CHECK(v.at(0, 1, 4, 0) == kBackground);
}

TEST_CASE("the walking cat moves right every frame") {
  const SceneGraph g = annotate(parse_prompt("a cat walking across a garden", movai::testing::default_lexicon()), 8);
  const VideoTensor v = render_scene(g, 64, 64, 8);
  const Rgb cat = g.objects[0].color;
  double prev = -1;
  for (std::size_t t = 0; t < 8; ++t) {
    const double cx = centroid_x(v, t, cat);
    CHECK(cx > prev);
    prev = cx;
  }
}

TEST_CASE("property: constant velocity gives near-constant centroid steps") {
  const Lexicon& lex = movai::testing::default_lexicon();
  for (const char* p : {"a car driving", "a ball rolling quickly", "a dog running"}) {
    const SceneGraph g = annotate(parse_prompt(p, lex), 8);
    const VideoTensor v = render_scene(g, 64, 64, 8);
    const Rgb c = g.objects[0].color;
    std::vector<double> steps;
    for (std::size_t t = 1; t < 8; ++t) steps.push_back(centroid_x(v, t, c) - centroid_x(v, t - 1, c));
    const double expect = g.objects[0].action->speed() * 64.0;
    for (double s : steps) CHECK(std::fabs(s - expect) <= 1.0);
  }
}

TEST_CASE("ground entities are drawn under actors") {
  const SceneGraph g = annotate(parse_prompt("a ball rolling on a table", movai::testing::default_lexicon()), 1);
  SceneGraph overlap = g;
  for (auto& a : overlap.annotations) a.positions[0] = {0.5, 0.5};
  const VideoTensor v = render_scene(overlap, 16, 16, 1);
  CHECK(v.at(0, 8, 8, 0) == g.objects[0].color[0]);
}

TEST_CASE("rendering needs annotations of the right length") {
  SceneGraph g = static_circle();
  CHECK_THROWS_AS(render_scene(g, 8, 8, 5), MissingAnnotations);
  g.annotations.clear();
  CHECK_THROWS_AS(render_scene(g, 8, 8, 4), MissingAnnotations);
}

TEST_CASE("rendering is deterministic") {
  const SceneGraph g = annotate(parse_prompt("a star spinning near the moon", movai::testing::default_lexicon()), 8);
  CHECK(encode_video(render_scene(g, 64, 64, 8)) == encode_video(render_scene(g, 64, 64, 8)));
}

TEST_CASE(".mvt layout and round trip") {
  VideoTensor v(2, 3, 4, 3);
  CounterRng rng(1, 1);
  for (double& x : v.values()) x = static_cast<float>(rng.uniform());
  const auto bytes = encode_video(v);
  REQUIRE(bytes.size() == 20 + 4 * v.size());
  CHECK(std::memcmp(bytes.data(), "MVT1", 4) == 0);
  CHECK(bytes[4] == 2);
  CHECK(bytes[8] == 3);
  CHECK(bytes[12] == 4);
  CHECK(bytes[16] == 3);
  CHECK(decode_video(bytes) == v);
  CHECK(encode_video(decode_video(bytes)) == bytes);
}

TEST_CASE("values are clamped before quantization") {
  VideoTensor v(1, 1, 1, 3);
  v[0] = -0.5;
  v[1] = 2.0;
  v[2] = 0.25;
  const VideoTensor back = decode_video(encode_video(v));
  CHECK(back[0] == 0.0);
  CHECK(back[1] == 1.0);
  CHECK(back[2] == 0.25);
}

TEST_CASE("corrupted .mvt files report offsets") {
  VideoTensor v(1, 2, 2, 3, 0.5);
  const auto good = encode_video(v);
  SUBCASE("magic") {
    auto b = good;
    b[1] = 'X';
    CHECK(error_offset(b) == 0);
  }
  SUBCASE("truncated header") { CHECK(error_offset({good.begin(), good.begin() + 10}) == 10); }
  SUBCASE("truncated payload") { CHECK(error_offset({good.begin(), good.end() - 3}) == good.size() - 3); }
  SUBCASE("zero width") {
    auto b = good;
    b[12] = 0;
    CHECK(error_offset(b) == 12);
  }
  SUBCASE("channel count") {
    auto b = good;
    b[16] = 4;
    CHECK(error_offset(b) == 16);
  }
  SUBCASE("trailing bytes") {
    auto b = good;
    b.push_back(0);
    CHECK(error_offset(b) == good.size());
  }
  SUBCASE("value out of range") {
    auto b = good;
    b[20 + 4 * 5 + 3] = 0x40;  // 2.0f
    b[20 + 4 * 5 + 2] = 0x00;
    b[20 + 4 * 5 + 1] = 0x00;
    b[20 + 4 * 5 + 0] = 0x00;
    CHECK(error_offset(b) == 40);
  }
}

TEST_CASE("ppm export quantizes with round half up") {
  VideoTensor v(1, 1, 3, 3);
  v.at(0, 0, 1, 0) = 1.0;
  v.at(0, 0, 2, 0) = 0.5;
  const auto dir = movai::testing::scratch_dir("ppm");
  const auto paths = export_frames(v, dir);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].filename() == "frame_0000.ppm");
  const auto bytes = read_file(paths[0]);
  const std::string header = "P6\n3 1\n255\n";
  REQUIRE(bytes.size() == header.size() + 9);
  CHECK(std::string(bytes.begin(), bytes.begin() + static_cast<long>(header.size())) == header);
  CHECK(bytes[header.size() + 0] == 0);
  CHECK(bytes[header.size() + 3] == 255);
  CHECK(bytes[header.size() + 6] == 128);
}

TEST_CASE("missing files are I/O errors") {
  CHECK_THROWS_AS(read_video("/nonexistent/dir/x.mvt"), IoError);
}
