#include "movai/gradient_suite.hpp"

#include <algorithm>
#include <functional>

#include "movai/objective.hpp"
#include "movai/pvr.hpp"
#include "movai/random.hpp"
#include "movai/tsam.hpp"

namespace movai {
namespace {

Tensor normal_tensor(std::vector<std::size_t> shape, CounterRng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& x : t.values()) x = scale * rng.normal();
  return t;
}

VideoTensor uniform_video(std::size_t n, std::size_t h, std::size_t w, CounterRng& rng) {
  VideoTensor v(n, h, w, 3);
  for (double& x : v.values()) x = rng.uniform();
  return v;
}

Tensor to_tensor(const VideoTensor& v) { return Tensor({v.size()}, v.values()); }

VideoTensor like(const VideoTensor& shape, const Tensor& flat) {
  VideoTensor v(shape.frames(), shape.height(), shape.width(), shape.channels());
  std::copy(flat.values().begin(), flat.values().end(), v.values().begin());
  return v;
}

Tensor concat(std::initializer_list<const Tensor*> parts) {
  std::vector<double> out;
  for (const Tensor* p : parts) out.insert(out.end(), p->values().begin(), p->values().end());
  const std::size_t n = out.size();
  return Tensor({n}, std::move(out));
}

// Splits a flat vector back into tensors shaped like `shapes`.
std::vector<Tensor> split(const Tensor& flat, const std::vector<std::vector<std::size_t>>& shapes) {
  std::vector<Tensor> out;
  std::size_t at = 0;
  for (const auto& s : shapes) {
    Tensor t(s);
    std::copy_n(flat.data() + at, t.size(), t.data());
    at += t.size();
    out.push_back(std::move(t));
  }
  return out;
}

double inner(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class Runner {
 public:
  explicit Runner(const GradSuiteOptions& o) : opts_(o) {}

  void check(const std::string& name, const std::function<std::pair<Differentiable, Tensor>(CounterRng&)>& make,
             double step = kGradCheckStep) {
    GradSuiteEntry e;
    e.name = name;
    e.step = step;
    for (int i = 0; i < opts_.instances; ++i) {
      CounterRng rng(opts_.seed, mix64(fnv1a(name.data(), name.size())) + static_cast<std::uint64_t>(i));
      auto [f, x] = make(rng);
      if (opts_.perturbation != 0.0) {
        auto inner_grad = f.gradient;
        const double scale = 1.0 + opts_.perturbation;
        f.gradient = [inner_grad, scale](const Tensor& t) {
          Tensor g = inner_grad(t);
          for (double& v : g.values()) v *= scale;
          return g;
        };
      }
      const auto report = grad_check(f, x, step);
      e.coordinates += report.checked;
      if (i == 0 || report.max_relative_error > e.worst.max_relative_error) e.worst = report;
      ++e.instances;
    }
    entries_.push_back(std::move(e));
  }

  std::vector<GradSuiteEntry> take() { return std::move(entries_); }

 private:
  GradSuiteOptions opts_;
  std::vector<GradSuiteEntry> entries_;
};

// Reduced refine-step model used for full-coordinate checks.
ModelConfig small_model() {
  ModelConfig c;
  c.patch = 2;
  c.d_model = 8;
  c.heads = 2;
  c.levels = 1;
  return c;
}

}  // namespace

std::vector<GradSuiteEntry> run_gradient_suite(const GradSuiteOptions& options) {
  Runner run(options);

  run.check("attention_backward", [](CounterRng& rng) {
    const Tensor q = normal_tensor({3, 4}, rng), k = normal_tensor({5, 4}, rng), v = normal_tensor({5, 3}, rng);
    const Tensor up = normal_tensor({3, 3}, rng);
    const std::vector<std::vector<std::size_t>> shapes{q.shape(), k.shape(), v.shape()};
    Differentiable f;
    f.value = [=](const Tensor& x) {
      const auto p = split(x, shapes);
      return inner(up, scaled_dot_attention(p[0], p[1], p[2]).output);
    };
    f.gradient = [=](const Tensor& x) {
      const auto p = split(x, shapes);
      const auto g = attention_backward(p[0], p[1], p[2], up);
      return concat({&g.dq, &g.dk, &g.dv});
    };
    return std::make_pair(f, concat({&q, &k, &v}));
  });

  run.check("recon_loss", [](CounterRng& rng) {
    const VideoTensor v = uniform_video(3, 4, 4, rng), target = uniform_video(3, 4, 4, rng);
    Differentiable f;
    f.value = [=](const Tensor& x) { return recon_loss(like(v, x), target); };
    f.gradient = [=](const Tensor& x) { return to_tensor(recon_loss_gradient(like(v, x), target)); };
    return std::make_pair(f, to_tensor(v));
  });

  run.check("temporal_loss", [](CounterRng& rng) {
    const VideoTensor v = uniform_video(4, 4, 4, rng);
    Differentiable f;
    f.value = [=](const Tensor& x) { return temporal_loss(like(v, x)); };
    f.gradient = [=](const Tensor& x) { return to_tensor(temporal_loss_gradient(like(v, x))); };
    return std::make_pair(f, to_tensor(v));
  });

  run.check("semantic_loss", [](CounterRng& rng) {
    const Tensor a = normal_tensor({32}, rng), b = normal_tensor({32}, rng);
    const std::vector<double> bv(b.values().begin(), b.values().end());
    Differentiable f;
    f.value = [=](const Tensor& x) { return semantic_loss({x.values().begin(), x.values().end()}, bv); };
    f.gradient = [=](const Tensor& x) {
      const auto g = semantic_loss_gradient({x.values().begin(), x.values().end()}, bv);
      return Tensor({g.size()}, g);
    };
    return std::make_pair(f, a);
  });

  run.check("composite_loss", [](CounterRng& rng) {
    const VideoTensor v = uniform_video(4, 4, 4, rng), target = uniform_video(4, 4, 4, rng);
    const Tensor g = normal_tensor({32}, rng);
    const std::vector<double> gv(g.values().begin(), g.values().end());
    const LossWeights w;
    Differentiable f;
    f.value = [=](const Tensor& x) { return composite_loss(like(v, x), target, gv, w).loss.composite; };
    f.gradient = [=](const Tensor& x) { return to_tensor(composite_loss(like(v, x), target, gv, w).gradient); };
    return std::make_pair(f, to_tensor(v));
  });

  run.check("tsam_projections", [](CounterRng& rng) {
    const ModelConfig cfg = small_model();
    ModelParams base = init_params(cfg, rng.next_u32());
    LevelParams lp = base.levels[0];
    for (double& l : lp.mix.logits) l = rng.normal();
    const Tensor x = normal_tensor({3, 4, cfg.d_model}, rng, 0.5);
    const Tensor text = normal_tensor({2, cfg.d_model}, rng, 0.5);
    const Tensor up = normal_tensor({3, 4, cfg.d_model}, rng);
    // Attention matrices and logits only; encode/decode/gain stay fixed.
    auto with = [lp](const Tensor& flat) {
      LevelParams p = lp;
      Tensor full = flatten(p);
      const std::size_t offset = p.encode.size() + p.decode.size();
      std::copy(flat.values().begin(), flat.values().end(), full.data() + offset);
      unflatten(full, p);
      return p;
    };
    const Tensor all = flatten(lp);
    const std::size_t offset = lp.encode.size() + lp.decode.size();
    Tensor sub({all.size() - offset - 1}, std::vector<double>(all.values().begin() + static_cast<std::ptrdiff_t>(offset),
                                                              all.values().end() - 1));
    Differentiable f;
    f.value = [=](const Tensor& t) {
      const LevelParams p = with(t);
      return inner(up, tsam_forward(x, text, p.attention, p.mix).out);
    };
    f.gradient = [=](const Tensor& t) {
      const LevelParams p = with(t);
      const auto fwd = tsam_forward(x, text, p.attention, p.mix);
      const auto g = tsam_backward(x, text, p.attention, p.mix, fwd, up);
      LevelParams gp = zeros_like(p);
      gp.attention = g.dparams;
      gp.mix.logits = g.dlogits;
      const Tensor gf = flatten(gp);
      return Tensor({gf.size() - offset - 1}, std::vector<double>(gf.values().begin() + static_cast<std::ptrdiff_t>(offset),
                                                                  gf.values().end() - 1));
    };
    return std::make_pair(f, sub);
  }, kGradCheckFineStep);

  auto refine_instance = [](CounterRng& rng) {
    const ModelConfig cfg = small_model();
    ModelParams params = init_params(cfg, rng.next_u32());
    for (double& l : params.levels[0].mix.logits) l = rng.normal();
    params.levels[0].gain = 0.5 + rng.uniform();
    const VideoTensor v = uniform_video(3, 4, 4, rng), target = uniform_video(3, 4, 4, rng);
    const Tensor text = normal_tensor({2, cfg.d_model}, rng, 0.5);
    const Tensor g = normal_tensor({cfg.d_model}, rng);
    return std::make_tuple(params, v, target, text, std::vector<double>(g.values().begin(), g.values().end()));
  };

  run.check("refine_step_params", [&](CounterRng& rng) {
    auto [params, v, target, text, gemb] = refine_instance(rng);
    // The semantic projection is 32-wide; pad the reduced graph embedding.
    gemb.resize(32, 0.25);
    const LossWeights w;
    auto with = [params](const Tensor& flat) {
      ModelParams p = params;
      unflatten(flat, p.levels[0]);
      return p;
    };
    Differentiable f;
    f.value = [=](const Tensor& t) {
      const ModelParams p = with(t);
      return composite_loss(refine_step(v, text, p, 0), target, gemb, w).loss.composite;
    };
    f.gradient = [=](const Tensor& t) {
      const ModelParams p = with(t);
      RefineCache cache;
      const VideoTensor out = refine_step(v, text, p, 0, &cache);
      const auto loss = composite_loss(out, target, gemb, w);
      return flatten(refine_step_backward(v, text, p, 0, cache, loss.gradient).dparams);
    };
    return std::make_pair(f, flatten(params.levels[0]));
  });

  run.check("refine_step_input", [&](CounterRng& rng) {
    auto [params, v, target, text, gemb] = refine_instance(rng);
    gemb.resize(32, 0.25);
    const LossWeights w;
    Differentiable f;
    f.value = [=](const Tensor& t) {
      return composite_loss(refine_step(like(v, t), text, params, 0), target, gemb, w).loss.composite;
    };
    f.gradient = [=](const Tensor& t) {
      const VideoTensor in = like(v, t);
      RefineCache cache;
      const VideoTensor out = refine_step(in, text, params, 0, &cache);
      const auto loss = composite_loss(out, target, gemb, w);
      return to_tensor(refine_step_backward(in, text, params, 0, cache, loss.gradient).dv);
    };
    return std::make_pair(f, to_tensor(v));
  }, kGradCheckFineStep);

  return run.take();
}

}  // namespace movai
