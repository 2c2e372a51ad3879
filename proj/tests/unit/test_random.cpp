#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "movai/random.hpp"

using namespace movai;

TEST_CASE("philox4x32-10 matches the Random123 known-answer vectors") {
  using Block = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("the i-th draw is the i-th word of the counter sequence") {
  const std::uint64_t seed = 0x0123456789abcdefULL;
  CounterRng rng(seed, 7);
  std::vector<std::uint32_t> draws;
  for (int i = 0; i < 12; ++i) draws.push_back(rng.next_u32());
  for (std::uint32_t block = 0; block < 3; ++block) {
    const auto words = philox4x32({block, 0, 7, 0}, {0x89abcdef, 0x01234567});
    for (int j = 0; j < 4; ++j) CHECK(draws[block * 4 + j] == words[j]);
  }
}

TEST_CASE("streams and seeds are independent") {
  CounterRng a(1, 0), b(1, 1), c(2, 0), a2(1, 0);
  bool differ_stream = false, differ_seed = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next_u32();
    differ_stream |= x != b.next_u32();
    differ_seed |= x != c.next_u32();
    CHECK(x == a2.next_u32());
  }
  CHECK(differ_stream);
  CHECK(differ_seed);
}

TEST_CASE("uniform and normal draws have the right moments") {
  CounterRng rng(42, 3);
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    su2 += u * u;
    const double z = rng.normal();
    REQUIRE(std::isfinite(z));
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n - (su / n) * (su / n) == doctest::Approx(1.0 / 12.0).epsilon(0.01));
  CHECK(std::abs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("below stays in range and hits every value") {
  CounterRng rng(9, 9);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = rng.below(7);
    REQUIRE(x < 7u);
    seen.insert(x);
  }
  CHECK(seen.size() == 7);
  CHECK(rng.below(1) == 0u);
}

TEST_CASE("fnv1a and mix64 reference values") {
  // FNV-1a 64 of "" and "a" from the reference description.
  CHECK(fnv1a("", 0) == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a", 1) == 0xaf63dc4c8601ec8cULL);
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
}
