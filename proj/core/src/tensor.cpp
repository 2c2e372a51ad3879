#include "movai/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "movai/error.hpp"

namespace movai {
namespace {

std::string shape_string(const std::vector<std::size_t>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

void require_rank2(const Tensor& t, const char* what) {
  if (t.rank() != 2) throw ShapeMismatch(std::string(what) + " must be rank 2, got " + shape_string(t.shape()));
}

}  // namespace

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_)) {
    throw ShapeMismatch("data length " + std::to_string(data_.size()) + " does not match shape " +
                        shape_string(shape_));
  }
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeMismatch("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(data));
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul lhs");
  require_rank2(b, "matmul rhs");
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("matmul " + shape_string(a.shape()) + " x " + shape_string(b.shape()));
  }
  const std::size_t m = a.rows(), k = a.cols(), p = b.cols();
  Tensor out({m, p});
  // i-k-j order: each output element accumulates over k in increasing order.
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = out.data() + i * p;
    const double* arow = a.data() + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double s = arow[kk];
      const double* brow = b.data() + kk * p;
      for (std::size_t j = 0; j < p; ++j) orow[j] += s * brow[j];
    }
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  Tensor out({a.cols(), a.rows()});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
  return out;
}

Tensor softmax(const Tensor& x, std::size_t axis) {
  if (axis >= x.rank()) throw ShapeMismatch("softmax axis out of range");
  const auto& s = x.shape();
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= s[i];
  for (std::size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
  const std::size_t len = s[axis];
  Tensor out(s);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      double mx = x[base];
      for (std::size_t i = 1; i < len; ++i) mx = std::max(mx, x[base + i * inner]);
      double sum = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const double e = std::exp(x[base + i * inner] - mx);
        out[base + i * inner] = e;
        sum += e;
      }
      for (std::size_t i = 0; i < len; ++i) out[base + i * inner] /= sum;
    }
  }
  return out;
}

void axpy(Tensor& a, double scale, const Tensor& b) {
  if (a.shape() != b.shape()) throw ShapeMismatch("axpy " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

namespace {

void check_attention_shapes(const Tensor& q, const Tensor& k, const Tensor& v) {
  require_rank2(q, "Q");
  require_rank2(k, "K");
  require_rank2(v, "V");
  if (q.cols() != k.cols() || k.rows() != v.rows() || k.rows() == 0) {
    throw ShapeMismatch("attention Q" + shape_string(q.shape()) + " K" + shape_string(k.shape()) + " V" +
                        shape_string(v.shape()));
  }
}

Tensor attention_weights(const Tensor& q, const Tensor& k) {
  Tensor logits = matmul(q, transpose(k));
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  for (double& l : logits.values()) l *= scale;
  return softmax(logits, 1);
}

}  // namespace

AttentionResult scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v) {
  check_attention_shapes(q, k, v);
  Tensor w = attention_weights(q, k);
  Tensor out = matmul(w, v);
  return {std::move(out), std::move(w)};
}

AttentionGrads attention_backward(const Tensor& q, const Tensor& k, const Tensor& v, const Tensor& upstream) {
  check_attention_shapes(q, k, v);
  if (upstream.rank() != 2 || upstream.rows() != q.rows() || upstream.cols() != v.cols()) {
    throw ShapeMismatch("attention upstream gradient " + shape_string(upstream.shape()));
  }
  const Tensor w = attention_weights(q, k);
  const std::size_t nq = q.rows(), nk = k.rows();
  Tensor dv = matmul(transpose(w), upstream);
  Tensor dw = matmul(upstream, transpose(v));
  // Softmax Jacobian per row: ds_ij = w_ij (dw_ij - sum_l w_il dw_il).
  Tensor ds({nq, nk});
  for (std::size_t i = 0; i < nq; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < nk; ++j) dot += w.at(i, j) * dw.at(i, j);
    for (std::size_t j = 0; j < nk; ++j) ds.at(i, j) = w.at(i, j) * (dw.at(i, j) - dot);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  for (double& x : ds.values()) x *= scale;
  Tensor dq = matmul(ds, k);
  Tensor dk = matmul(transpose(ds), q);
  return {std::move(dq), std::move(dk), std::move(dv)};
}

GradCheckReport grad_check(const Differentiable& f, const Tensor& x, double eps,
                           std::span<const std::size_t> coordinates) {
  if (!(eps > 0.0)) throw Error("grad_check step must be positive");
  const Tensor analytic = f.gradient(x);
  if (analytic.size() != x.size()) throw ShapeMismatch("gradient size does not match input");
  GradCheckReport report;
  report.step = eps;
  Tensor probe = x;
  auto check = [&](std::size_t i) {
    const double saved = probe[i];
    probe[i] = saved + eps;
    const double up = f.value(probe);
    probe[i] = saved - eps;
    const double down = f.value(probe);
    probe[i] = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    const double rel = std::abs(a - numeric) / denom;
    if (report.checked == 0 || rel > report.max_relative_error) {
      report.max_relative_error = rel;
      report.worst_index = i;
      report.analytic = a;
      report.numeric = numeric;
    }
    ++report.checked;
  };
  if (coordinates.empty()) {
    for (std::size_t i = 0; i < x.size(); ++i) check(i);
  } else {
    for (std::size_t i : coordinates) {
      if (i >= x.size()) throw ShapeMismatch("grad_check coordinate out of range");
      check(i);
    }
  }
  return report;
}

}  // namespace movai
