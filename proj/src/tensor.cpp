#include "medgrad/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace medgrad {

namespace {

std::size_t checked_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw std::invalid_argument("Tensor: zero extent");
    n *= e;
  }
  return n;
}

void check_finite(const std::vector<double>& data, const char* what) {
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + ": non-finite element");
    }
  }
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_count(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_count(shape_) != data_.size()) {
    throw std::invalid_argument("Tensor: shape does not match data length");
  }
  check_finite(data_, "Tensor");
}

Tensor::Tensor(std::initializer_list<double> values)
    : shape_{values.size()}, data_(values) {
  if (data_.empty()) throw std::invalid_argument("Tensor: empty value list");
  check_finite(data_, "Tensor");
}

Tensor Tensor::full(std::vector<std::size_t> shape, double v) {
  Tensor t(std::move(shape));
  std::fill(t.data_.begin(), t.data_.end(), v);
  check_finite(t.data_, "Tensor::full");
  return t;
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> idx) const {
  if (idx.size() != shape_.size()) {
    throw std::invalid_argument("Tensor::offset: rank mismatch");
  }
  std::size_t off = 0;
  std::size_t axis = 0;
  for (std::size_t i : idx) {
    if (i >= shape_[axis]) throw std::out_of_range("Tensor::offset: index out of range");
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

void Tensor::require_finite(const std::string& context) const {
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::runtime_error(context + ": non-finite element");
  }
}

Tensor sigmoid(const Tensor& t) {
  Tensor out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = t[i];
    // evaluate on the negative side only; exp never overflows
    out[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                      : std::exp(x) / (1.0 + std::exp(x));
  }
  return out;
}

Tensor softmax(const Tensor& t, std::size_t axis) {
  if (axis >= t.ndim()) throw std::invalid_argument("softmax: axis out of range");
  const auto& shape = t.shape();
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t n = shape[axis];

  Tensor out(t.shape());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * n * inner + in;
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k) m = std::max(m, t[base + k * inner]);
      double z = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double e = std::exp(t[base + k * inner] - m);
        out[base + k * inner] = e;
        z += e;
      }
      for (std::size_t k = 0; k < n; ++k) out[base + k * inner] /= z;
    }
  }
  return out;
}

Tensor finite_diff_grad(const std::function<double(const Tensor&)>& f,
                        const Tensor& x, double h) {
  if (h <= 0.0) throw std::invalid_argument("finite_diff_grad: h must be positive");
  Tensor probe = x;
  Tensor grad(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + h;
    const double fp = f(probe);
    probe[i] = orig - h;
    const double fm = f(probe);
    probe[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw std::runtime_error("finite_diff_grad: non-finite function value");
    }
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Tensor reduce(const Tensor& t, ReduceOp op, std::optional<std::size_t> axis) {
  if (!axis.has_value()) {
    double acc;
    if (op == ReduceOp::max) {
      acc = t[0];
      for (std::size_t i = 1; i < t.size(); ++i) acc = std::max(acc, t[i]);
    } else {
      acc = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) acc += t[i];
      if (op == ReduceOp::mean) acc /= static_cast<double>(t.size());
    }
    return Tensor::scalar(acc);
  }

  const std::size_t ax = *axis;
  if (ax >= t.ndim()) throw std::invalid_argument("reduce: axis out of range");
  const auto& shape = t.shape();
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < ax; ++a) outer *= shape[a];
  for (std::size_t a = ax + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t n = shape[ax];

  std::vector<std::size_t> out_shape;
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (a != ax) out_shape.push_back(shape[a]);
  }
  if (out_shape.empty()) out_shape.push_back(1);

  Tensor out(out_shape);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * n * inner + in;
      double acc = op == ReduceOp::max ? t[base] : 0.0;
      for (std::size_t k = op == ReduceOp::max ? 1 : 0; k < n; ++k) {
        const double v = t[base + k * inner];
        acc = op == ReduceOp::max ? std::max(acc, v) : acc + v;
      }
      if (op == ReduceOp::mean) acc /= static_cast<double>(n);
      out[o * inner + in] = acc;
    }
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("add: shape mismatch");
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("sub: shape mismatch");
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Tensor scale(const Tensor& a, double c) {
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * c;
  out.require_finite("scale");
  return out;
}

double l2_norm(const Tensor& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * t[i];
  return std::sqrt(s);
}

GradCheckReport compare_gradients(const Tensor& analytic, const Tensor& numeric) {
  if (!analytic.same_shape(numeric)) {
    throw std::invalid_argument("compare_gradients: shape mismatch");
  }
  GradCheckReport report;
  report.entries.reserve(analytic.size());
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i];
    const double n = numeric[i];
    const double abs_err = std::abs(a - n);
    const double denom = std::max({std::abs(a), std::abs(n), 1e-8});
    report.max_abs_err = std::max(report.max_abs_err, abs_err);
    report.max_rel_err = std::max(report.max_rel_err, abs_err / denom);
    report.entries.emplace_back(a, n);
  }
  return report;
}

GradCheckReport check_gradient(const std::function<double(const Tensor&)>& f,
                               const Tensor& x, const Tensor& analytic,
                               double h) {
  return compare_gradients(analytic, finite_diff_grad(f, x, h));
}

}  // namespace medgrad
