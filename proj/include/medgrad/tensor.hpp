#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace medgrad {

/// Dense row-major N-d array of doubles. Extents are strictly positive and
/// every element is finite; both are checked on construction, so any Tensor
/// you hold satisfies them.
class Tensor {
 public:
  /// Scalar zero.
  Tensor() : shape_{1}, data_{0.0} {}

  /// Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);

  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  /// 1-d tensor from a value list.
  Tensor(std::initializer_list<double> values);

  static Tensor scalar(double v) { return Tensor({1}, {v}); }
  static Tensor full(std::vector<std::size_t> shape, double v);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t ndim() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// Flat offset of a multi-index (row-major).
  std::size_t offset(std::initializer_list<std::size_t> idx) const;
  double& at(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }
  double at(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  /// Throws if any element is non-finite; used by ops that can overflow.
  void require_finite(const std::string& context) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

enum class ReduceOp { sum, mean, max };

/// Elementwise logistic function, shape preserved.
Tensor sigmoid(const Tensor& t);

/// Softmax along `axis`, log-sum-exp stabilized; slices sum to 1.
Tensor softmax(const Tensor& t, std::size_t axis);

/// Central-difference gradient of a scalar function at x.
/// Throws if f evaluates to a non-finite value at any probe point.
Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f,
                        const Tensor& x, double h = 1e-5);

/// sum/mean/max over the whole tensor (axis omitted, result shape {1}) or
/// along one axis (that axis removed; shape {1} if nothing remains).
Tensor reduce(const Tensor& t, ReduceOp op,
              std::optional<std::size_t> axis = std::nullopt);

inline double sum(const Tensor& t) { return reduce(t, ReduceOp::sum)[0]; }
inline double mean(const Tensor& t) { return reduce(t, ReduceOp::mean)[0]; }
inline double max(const Tensor& t) { return reduce(t, ReduceOp::max)[0]; }

/// Elementwise combinations; shapes must match.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double c);

/// L2 norm of all elements.
double l2_norm(const Tensor& t);

/// Side-by-side comparison of an analytic gradient against a numeric one.
struct GradCheckReport {
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  /// (analytic, numeric) for every element of the checked gradient.
  std::vector<std::pair<double, double>> entries;
};

/// Relative error uses denominator max(|analytic|, |numeric|, 1e-8).
GradCheckReport compare_gradients(const Tensor& analytic, const Tensor& numeric);

/// Convenience: numeric gradient of f at x vs. a provided analytic gradient.
GradCheckReport check_gradient(const std::function<double(const Tensor&)>& f,
                               const Tensor& x, const Tensor& analytic,
                               double h = 1e-5);

}  // namespace medgrad
