#include <cmath>

#include "doctest.h"
#include "movai/error.hpp"
#include "movai/pvr.hpp"
#include "movai/tsam.hpp"
#include "test_support.hpp"

using namespace movai;
using movai::testing::max_abs_diff;
using movai::testing::random_tensor;

namespace {

constexpr std::size_t kD = 8;

AttentionParams random_params(CounterRng& rng, std::size_t heads = 2) {
  AttentionParams p;
  p.heads = heads;
  for (Projections* pr : {&p.spatial, &p.temporal, &p.cross})
    for (Tensor* w : {&pr->wq, &pr->wk, &pr->wv}) *w = random_tensor({kD, kD}, rng, 0.4);
  return p;
}

Tensor frame(const Tensor& x, std::size_t t) {
  const std::size_t s = x.dim(1), d = x.dim(2);
  return Tensor({s, d}, std::vector<double>(x.data() + t * s * d, x.data() + (t + 1) * s * d));
}

Tensor permute_frames(const Tensor& x, const std::vector<std::size_t>& order) {
  Tensor out(x.shape());
  const std::size_t fs = x.dim(1) * x.dim(2);
  for (std::size_t t = 0; t < order.size(); ++t) std::copy_n(x.data() + order[t] * fs, fs, out.data() + t * fs);
  return out;
}

}  // namespace

TEST_CASE("sinusoidal frame encoding") {
  const Tensor pe = frame_position_encoding(3, 4);
  CHECK(pe.at(0, 0) == 0.0);
  CHECK(pe.at(0, 1) == 1.0);
  CHECK(pe.at(2, 0) == doctest::Approx(std::sin(2.0)));
  CHECK(pe.at(2, 3) == doctest::Approx(std::cos(2.0 / 100.0)));
}

TEST_CASE("multi-head attention splits columns per head") {
  CounterRng rng(1, 0);
  const Tensor x = random_tensor({5, kD}, rng);
  Projections p{random_tensor({kD, kD}, rng), random_tensor({kD, kD}, rng), random_tensor({kD, kD}, rng)};
  const Tensor y = multi_head_attention(x, x, p, 2);
  const Tensor q = matmul(x, p.wq), k = matmul(x, p.wk), v = matmul(x, p.wv);
  for (std::size_t h = 0; h < 2; ++h) {
    Tensor qh({5, 4}), kh({5, 4}), vh({5, 4});
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        qh.at(r, c) = q.at(r, 4 * h + c);
        kh.at(r, c) = k.at(r, 4 * h + c);
        vh.at(r, c) = v.at(r, 4 * h + c);
      }
    const Tensor oh = scaled_dot_attention(qh, kh, vh).output;
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < 4; ++c) CHECK(y.at(r, 4 * h + c) == oh.at(r, c));
  }
}

TEST_CASE("spatial attention") {
  CounterRng rng(2, 0);
  const AttentionParams p = random_params(rng);
  SUBCASE("a single frame is plain attention over its tokens") {
    const Tensor x = random_tensor({1, 5, kD}, rng);
    const Tensor f = frame(x, 0);
    CHECK(max_abs_diff(frame(spatial_attention(x, p), 0), multi_head_attention(f, f, p.spatial, p.heads)) == 0.0);
  }
  SUBCASE("identical frames give identical outputs") {
    Tensor x = random_tensor({2, 4, kD}, rng);
    std::copy_n(x.data(), 4 * kD, x.data() + 4 * kD);
    const Tensor y = spatial_attention(x, p);
    CHECK(frame(y, 0) == frame(y, 1));
  }
  SUBCASE("permuting frames permutes outputs") {
    const Tensor x = random_tensor({4, 3, kD}, rng);
    const std::vector<std::size_t> order{2, 0, 3, 1};
    CHECK(spatial_attention(permute_frames(x, order), p) == permute_frames(spatial_attention(x, p), order));
  }
  SUBCASE("wrong width is a shape error") { CHECK_THROWS_AS(spatial_attention(Tensor({2, 3, 5}), p), ShapeMismatch); }
}

TEST_CASE("temporal attention") {
  CounterRng rng(3, 0);
  const AttentionParams p = random_params(rng);
  SUBCASE("one frame returns the value projection of the encoded token") {
    const Tensor x = random_tensor({1, 3, kD}, rng);
    const Tensor pe = frame_position_encoding(1, kD);
    Tensor xe = frame(x, 0);
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t c = 0; c < kD; ++c) xe.at(s, c) += pe.at(0, c);
    CHECK(max_abs_diff(frame(temporal_attention(x, p), 0), matmul(xe, p.temporal.wv)) < 1e-14);
    CHECK(max_abs_diff(frame(temporal_attention(x, p, false), 0), matmul(frame(x, 0), p.temporal.wv)) < 1e-14);
  }
  SUBCASE("a static video gives equal output frames without encodings") {
    Tensor x({4, 3, kD});
    const Tensor f = random_tensor({3, kD}, rng);
    for (std::size_t t = 0; t < 4; ++t) std::copy_n(f.data(), 3 * kD, x.data() + t * 3 * kD);
    const Tensor y = temporal_attention(x, p, false);
    for (std::size_t t = 1; t < 4; ++t) CHECK(max_abs_diff(frame(y, t), frame(y, 0)) < 1e-14);
  }
  SUBCASE("without encodings, permuting frames permutes outputs") {
    const Tensor x = random_tensor({4, 3, kD}, rng);
    const std::vector<std::size_t> order{3, 1, 0, 2};
    CHECK(max_abs_diff(temporal_attention(permute_frames(x, order), p, false),
                       permute_frames(temporal_attention(x, p, false), order)) < 1e-13);
  }
  SUBCASE("with encodings, frame order matters") {
    const Tensor x = random_tensor({4, 3, kD}, rng);
    const std::vector<std::size_t> order{3, 1, 0, 2};
    CHECK(max_abs_diff(temporal_attention(permute_frames(x, order), p),
                       permute_frames(temporal_attention(x, p), order)) > 1e-6);
  }
}

TEST_CASE("property: branch isolation under delta perturbations") {
  CounterRng rng(4, 0);
  const AttentionParams p = random_params(rng);
  const std::size_t n = 3, s = 4;
  const Tensor x = random_tensor({n, s, kD}, rng);
  const Tensor sa = spatial_attention(x, p), ta = temporal_attention(x, p);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t loc = 0; loc < s; ++loc) {
      Tensor xp = x;
      xp[(t * s + loc) * kD + 3] += 0.5;
      const Tensor sp = spatial_attention(xp, p), tp = temporal_attention(xp, p);
      for (std::size_t t2 = 0; t2 < n; ++t2)
        for (std::size_t l2 = 0; l2 < s; ++l2) {
          bool sa_changed = false, ta_changed = false;
          for (std::size_t c = 0; c < kD; ++c) {
            const std::size_t i = (t2 * s + l2) * kD + c;
            sa_changed |= sp[i] != sa[i];
            ta_changed |= tp[i] != ta[i];
          }
          if (t2 != t) CHECK_FALSE(sa_changed);
          if (l2 != loc) CHECK_FALSE(ta_changed);
        }
    }
}

TEST_CASE("cross-modal attention") {
  CounterRng rng(5, 0);
  const AttentionParams p = random_params(rng);
  const Tensor x = random_tensor({2, 3, kD}, rng);
  SUBCASE("one entity: every token gets its value projection") {
    const Tensor text = random_tensor({1, kD}, rng);
    const Tensor y = cross_modal_attention(x, text, p);
    const Tensor v = matmul(text, p.cross.wv);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t c = 0; c < kD; ++c) CHECK(y[i * kD + c] == doctest::Approx(v[c]).epsilon(1e-14));
  }
  SUBCASE("duplicating an entity row changes nothing") {
    const Tensor text = random_tensor({2, kD}, rng);
    Tensor dup({3, kD});
    std::copy_n(text.data(), 2 * kD, dup.data());
    std::copy_n(text.data(), kD, dup.data() + 2 * kD);
    Tensor twice({4, kD});
    std::copy_n(text.data(), 2 * kD, twice.data());
    std::copy_n(text.data(), 2 * kD, twice.data() + 2 * kD);
    CHECK(max_abs_diff(cross_modal_attention(x, twice, p), cross_modal_attention(x, text, p)) < 1e-13);
    CHECK(max_abs_diff(cross_modal_attention(x, dup, p), cross_modal_attention(x, text, p)) > 1e-9);
  }
  SUBCASE("zero queries attend uniformly") {
    const Tensor text = random_tensor({3, kD}, rng);
    const Tensor y = cross_modal_attention(Tensor({1, 2, kD}), text, p);
    const Tensor v = matmul(text, p.cross.wv);
    for (std::size_t c = 0; c < kD; ++c)
      CHECK(y[c] == doctest::Approx((v.at(0, c) + v.at(1, c) + v.at(2, c)) / 3.0).epsilon(1e-13));
  }
  SUBCASE("no entities") { CHECK_THROWS_AS(cross_modal_attention(x, Tensor({0, kD}), p), EmptyConditioning); }
}

TEST_CASE("tsam_combine") {
  CounterRng rng(6, 0);
  const Tensor sa = random_tensor({2, 3, kD}, rng), ta = random_tensor({2, 3, kD}, rng),
               cma = random_tensor({2, 3, kD}, rng);
  SUBCASE("saturated logits select a branch") {
    CHECK(max_abs_diff(tsam_combine(sa, ta, cma, {{50, -50, -50}}), sa) < 1e-6);
    CHECK(max_abs_diff(tsam_combine(sa, ta, cma, {{-50, 50, -50}}), ta) < 1e-6);
  }
  SUBCASE("uniform logits average") {
    const Tensor y = tsam_combine(sa, ta, cma, {});
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx((sa[i] + ta[i] + cma[i]) / 3.0));
  }
  SUBCASE("equal branches pass through") {
    const Tensor y = tsam_combine(sa, sa, sa, {{3.0, -1.0, 0.5}});
    CHECK(max_abs_diff(y, sa) < 1e-14);
  }
  SUBCASE("weights are a softmax") {
    const auto w = TsamWeights{{1.0, 2.0, 3.0}}.weights();
    CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[2] / w[1] == doctest::Approx(std::exp(1.0)));
  }
  SUBCASE("shape mismatch") { CHECK_THROWS_AS(tsam_combine(sa, ta, Tensor({2, 3, 4}), {}), ShapeMismatch); }
}

TEST_CASE("property: combination stays in the elementwise convex hull") {
  CounterRng rng(7, 0);
  for (int i = 0; i < 100; ++i) {
    const Tensor a = random_tensor({2, 2, 4}, rng), b = random_tensor({2, 2, 4}, rng), c = random_tensor({2, 2, 4}, rng);
    const TsamWeights w{{3 * rng.normal(), 3 * rng.normal(), 3 * rng.normal()}};
    const Tensor y = tsam_combine(a, b, c, w);
    for (std::size_t j = 0; j < y.size(); ++j) {
      CHECK(y[j] >= std::min({a[j], b[j], c[j]}) - 1e-12);
      CHECK(y[j] <= std::max({a[j], b[j], c[j]}) + 1e-12);
    }
  }
}

TEST_CASE("property: every TSAM op preserves the latent shape") {
  CounterRng rng(8, 0);
  const AttentionParams p = random_params(rng);
  const Tensor x = random_tensor({3, 5, kD}, rng), text = random_tensor({2, kD}, rng);
  const auto f = tsam_forward(x, text, p, {});
  for (const Tensor* t : {&f.sa, &f.ta, &f.cma, &f.out}) CHECK(t->shape() == x.shape());
}

TEST_CASE("gradient of the combined branches with respect to every projection") {
  // Fine step; see kGradCheckFineStep.
  CounterRng rng(9, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const AttentionParams p = random_params(rng);
    const TsamWeights w{{rng.normal(), rng.normal(), rng.normal()}};
    const Tensor x = random_tensor({3, 4, kD}, rng, 0.5), text = random_tensor({2, kD}, rng, 0.5);
    const Tensor up = random_tensor({3, 4, kD}, rng);
    LevelParams lp;
    lp.encode = Tensor({1, 1});
    lp.decode = Tensor({1, 1});
    lp.attention = p;
    lp.mix = w;
    auto unpack = [lp](const Tensor& flat) {
      LevelParams q = lp;
      unflatten(flat, q);
      return q;
    };
    Differentiable f;
    f.value = [&](const Tensor& flat) {
      const LevelParams q = unpack(flat);
      const Tensor y = tsam_forward(x, text, q.attention, q.mix).out;
      double s = 0;
      for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * up[i];
      return s;
    };
    f.gradient = [&](const Tensor& flat) {
      const LevelParams q = unpack(flat);
      const auto fwd = tsam_forward(x, text, q.attention, q.mix);
      const auto g = tsam_backward(x, text, q.attention, q.mix, fwd, up);
      LevelParams gl = zeros_like(q);
      gl.attention = g.dparams;
      gl.mix.logits = g.dlogits;
      return flatten(gl);
    };
    std::vector<std::size_t> coords;  // everything except the dummy encode/decode and gain
    const std::size_t total = flatten(lp).size();
    for (std::size_t i = 2; i + 1 < total; ++i) coords.push_back(i);
    CHECK(grad_check(f, flatten(lp), 1e-4, coords).max_relative_error < 1e-4);
  }
}

TEST_CASE("gradient with respect to the latent input") {
  CounterRng rng(10, 0);
  const AttentionParams p = random_params(rng);
  const TsamWeights w{{0.3, -0.2, 0.1}};
  const Tensor x0 = random_tensor({3, 4, kD}, rng, 0.5), text = random_tensor({2, kD}, rng, 0.5);
  const Tensor up = random_tensor({3, 4, kD}, rng);
  Differentiable f;
  f.value = [&](const Tensor& x) {
    const Tensor y = tsam_forward(x, text, p, w).out;
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * up[i];
    return s;
  };
  f.gradient = [&](const Tensor& x) { return tsam_backward(x, text, p, w, tsam_forward(x, text, p, w), up).dx; };
  CHECK(grad_check(f, x0, 1e-4).max_relative_error < 1e-4);
}
