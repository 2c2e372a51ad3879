#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace movai {

/// Dense row-major tensor of doubles.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  /// Rank-2 convenience: `Tensor::matrix({{1, 2}, {3, 4}})`.
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor identity(std::size_t n);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Rank-2 accessors.
  std::size_t rows() const { return shape_.at(0); }
  std::size_t cols() const { return shape_.at(1); }
  double& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

  bool operator==(const Tensor&) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::size_t shape_size(const std::vector<std::size_t>& shape);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
/// Max-subtracted softmax along `axis`.
Tensor softmax(const Tensor& x, std::size_t axis);

/// `a += scale * b`, same shapes required.
void axpy(Tensor& a, double scale, const Tensor& b);

struct AttentionResult {
  Tensor output;   // n_q x d_v
  Tensor weights;  // n_q x n_k, row-stochastic
};

/// softmax(Q K^T / sqrt(d_k)) V for Q:[n_q x d_k], K:[n_k x d_k], V:[n_k x d_v].
AttentionResult scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v);

struct AttentionGrads {
  Tensor dq, dk, dv;
};

/// Gradients of <upstream, scaled_dot_attention(q, k, v).output>.
AttentionGrads attention_backward(const Tensor& q, const Tensor& k, const Tensor& v,
                                  const Tensor& upstream);

/// Scalar function with its analytic gradient.
struct Differentiable {
  std::function<double(const Tensor&)> value;
  std::function<Tensor(const Tensor&)> gradient;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double step = 0.0;
  std::size_t checked = 0;
};

/// Central differences (f(x + eps e_i) - f(x - eps e_i)) / 2 eps against the
/// analytic gradient, relative error denominator max(|a|, |n|, 1e-8).
/// `coordinates` restricts the comparison to a subset; empty means all.
GradCheckReport grad_check(const Differentiable& f, const Tensor& x, double eps,
                           std::span<const std::size_t> coordinates = {});

}  // namespace movai
