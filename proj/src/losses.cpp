#include "medgrad/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace medgrad::losses {

namespace {

constexpr double kProbFloor = 1e-7;

void check_cn_pair(const Tensor& probs, const Tensor& labels, const char* op) {
  if (probs.ndim() != 2 || labels.ndim() != 2 || !probs.same_shape(labels)) {
    throw std::invalid_argument(std::string(op) + ": expected matching [C x N] tensors");
  }
}

}  // namespace

AnnotationMask make_annotation_mask(const std::vector<int>& anatomy_annotated) {
  AnnotationMask mask;
  int all = 1;
  for (int v : anatomy_annotated) {
    if (v != 0 && v != 1) throw std::invalid_argument("annotation mask entries must be 0/1");
    all &= v;
  }
  mask.m.push_back(all);
  mask.m.insert(mask.m.end(), anatomy_annotated.begin(), anatomy_annotated.end());
  return mask;
}

ClassStats class_stats(const Tensor& probs, const Tensor& labels) {
  check_cn_pair(probs, labels, "class_stats");
  const std::size_t c_count = probs.extent(0);
  const std::size_t n = probs.extent(1);
  ClassStats stats;
  stats.tp.assign(c_count, 0.0);
  stats.fn_.assign(c_count, 0.0);
  stats.fp.assign(c_count, 0.0);
  for (std::size_t c = 0; c < c_count; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = probs[c * n + i];
      const double g = labels[c * n + i];
      stats.tp[c] += p * g;
      stats.fn_[c] += (1.0 - p) * g;
      stats.fp[c] += p * (1.0 - g);
    }
  }
  return stats;
}

namespace {

// Shared core for the plain and masked/weighted Dice variants: factor[c]
// multiplies the per-class term (1.0 everywhere for the plain loss).
LossOutput dice_core(const Tensor& probs, const Tensor& labels,
                     const std::vector<double>& factor, double alpha,
                     double beta, double eps) {
  const auto stats = class_stats(probs, labels);
  const std::size_t c_count = probs.extent(0);
  const std::size_t n = probs.extent(1);

  LossOutput out;
  out.value = static_cast<double>(c_count);
  out.grad = Tensor(probs.shape());

  for (std::size_t c = 0; c < c_count; ++c) {
    const double denom = stats.tp[c] + alpha * stats.fn_[c] + beta * stats.fp[c];
    if (eps == 0.0 && denom == 0.0) {
      // class absent from both prediction mass and ground truth: term := 1
      out.value -= factor[c];
      continue;
    }
    const double num = stats.tp[c] + eps;
    const double den = denom + eps;
    out.value -= factor[c] * num / den;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = labels[c * n + i];
      // d num / d p = g ; d den / d p = g - alpha*g + beta*(1-g)
      const double dden = g - alpha * g + beta * (1.0 - g);
      const double dterm = (g * den - num * dden) / (den * den);
      out.grad[c * n + i] = -factor[c] * dterm;
    }
  }
  return out;
}

LossOutput focal_core(const Tensor& probs, const Tensor& labels,
                      const std::vector<double>& factor, double gamma) {
  const std::size_t c_count = probs.extent(0);
  const std::size_t n = probs.extent(1);
  LossOutput out;
  out.grad = Tensor(probs.shape());
  double acc = 0.0;
  for (std::size_t c = 0; c < c_count; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const double g = labels[c * n + i];
      if (g == 0.0) continue;
      const double raw = probs[c * n + i];
      const double p = std::clamp(raw, kProbFloor, 1.0);
      const double q = 1.0 - p;
      const double mod = std::pow(q, gamma);
      acc += factor[c] * g * mod * std::log(p);
      if (raw > kProbFloor && raw < 1.0) {
        const double dmod = gamma > 0.0 ? -gamma * std::pow(q, gamma - 1.0) : 0.0;
        out.grad[c * n + i] =
            -factor[c] * g * (dmod * std::log(p) + mod / p) / static_cast<double>(n);
      }
    }
  }
  out.value = -acc / static_cast<double>(n);
  return out;
}

}  // namespace

LossOutput dice_loss(const Tensor& probs, const Tensor& labels, double alpha,
                     double beta, double eps) {
  check_cn_pair(probs, labels, "dice_loss");
  if (alpha <= 0.0 || beta <= 0.0) throw std::invalid_argument("dice_loss: alpha, beta must be positive");
  if (eps < 0.0) throw std::invalid_argument("dice_loss: eps must be nonnegative");
  return dice_core(probs, labels, std::vector<double>(probs.extent(0), 1.0),
                   alpha, beta, eps);
}

LossOutput focal_loss(const Tensor& probs, const Tensor& labels, double gamma) {
  check_cn_pair(probs, labels, "focal_loss");
  return focal_core(probs, labels, std::vector<double>(probs.extent(0), 1.0), gamma);
}

LossOutput hybrid_loss(const Tensor& probs, const Tensor& labels, double lambda,
                       double alpha, double beta, double eps, double gamma) {
  if (lambda < 0.0) throw std::invalid_argument("hybrid_loss: lambda must be nonnegative");
  LossOutput dice = dice_loss(probs, labels, alpha, beta, eps);
  const LossOutput focal = focal_loss(probs, labels, gamma);
  dice.value += lambda * focal.value;
  for (std::size_t i = 0; i < dice.grad.size(); ++i) {
    dice.grad[i] += lambda * focal.grad[i];
  }
  return dice;
}

std::vector<double> annotation_weights(const std::vector<AnnotationMask>& masks) {
  if (masks.empty()) throw std::invalid_argument("annotation_weights: no masks");
  const std::size_t c_count = masks.front().m.size();
  std::vector<double> counts(c_count, 0.0);
  for (const auto& mask : masks) {
    if (mask.m.size() != c_count) {
      throw std::invalid_argument("annotation_weights: inconsistent mask length");
    }
    for (std::size_t c = 0; c < c_count; ++c) counts[c] += mask.m[c];
  }
  std::vector<double> weights(c_count);
  for (std::size_t c = 0; c < c_count; ++c) {
    if (counts[c] == 0.0) {
      throw std::invalid_argument("annotation_weights: class " + std::to_string(c) +
                                  " is never annotated");
    }
    weights[c] = 1.0 / counts[c];
  }
  return weights;
}

namespace {

std::vector<double> mask_factor(const AnnotationMask& mask,
                                const std::vector<double>& weights,
                                std::size_t c_count, const char* op) {
  if (mask.m.size() != c_count || weights.size() != c_count) {
    throw std::invalid_argument(std::string(op) + ": mask/weights length mismatch");
  }
  std::vector<double> factor(c_count);
  for (std::size_t c = 0; c < c_count; ++c) factor[c] = mask.m[c] * weights[c];
  return factor;
}

}  // namespace

LossOutput masked_weighted_dice(const Tensor& probs, const Tensor& labels,
                                const AnnotationMask& mask,
                                const std::vector<double>& weights, double alpha,
                                double beta, double eps) {
  check_cn_pair(probs, labels, "masked_weighted_dice");
  return dice_core(probs, labels,
                   mask_factor(mask, weights, probs.extent(0), "masked_weighted_dice"),
                   alpha, beta, eps);
}

LossOutput masked_weighted_focal(const Tensor& probs, const Tensor& labels,
                                 const AnnotationMask& mask,
                                 const std::vector<double>& weights, double gamma) {
  check_cn_pair(probs, labels, "masked_weighted_focal");
  return focal_core(probs, labels,
                    mask_factor(mask, weights, probs.extent(0), "masked_weighted_focal"),
                    gamma);
}

LossOutput fcn_nll(const Tensor& probs, const Tensor& labels) {
  check_cn_pair(probs, labels, "fcn_nll");
  const std::size_t c_count = probs.extent(0);
  const std::size_t n = probs.extent(1);
  LossOutput out;
  out.grad = Tensor(probs.shape());
  double acc = 0.0;
  for (std::size_t c = 0; c < c_count; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const double g = labels[c * n + i];
      if (g == 0.0) continue;
      const double raw = probs[c * n + i];
      const double p = std::max(raw, kProbFloor);
      acc += g * std::log(p);
      if (raw > kProbFloor) {
        out.grad[c * n + i] = -g / (p * static_cast<double>(n));
      }
    }
  }
  out.value = -acc / static_cast<double>(n);
  return out;
}

LossOutput bce(const Tensor& p, const Tensor& y) {
  if (!p.same_shape(y)) throw std::invalid_argument("bce: shape mismatch");
  const std::size_t n = p.size();
  LossOutput out;
  out.grad = Tensor(p.shape());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double raw = p[i];
    const double pi = std::clamp(raw, kProbFloor, 1.0 - kProbFloor);
    const double yi = y[i];
    acc += yi * std::log(pi) + (1.0 - yi) * std::log(1.0 - pi);
    if (raw > kProbFloor && raw < 1.0 - kProbFloor) {
      out.grad[i] = -(yi / pi - (1.0 - yi) / (1.0 - pi)) / static_cast<double>(n);
    }
  }
  out.value = -acc / static_cast<double>(n);
  return out;
}

LossOutput smooth_l1(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target)) throw std::invalid_argument("smooth_l1: shape mismatch");
  const std::size_t n = pred.size();
  LossOutput out;
  out.grad = Tensor(pred.shape());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pred[i] - target[i];
    if (std::abs(x) < 1.0) {
      acc += 0.5 * x * x;
      out.grad[i] = x / static_cast<double>(n);
    } else {
      acc += std::abs(x) - 0.5;
      out.grad[i] = (x > 0.0 ? 1.0 : -1.0) / static_cast<double>(n);
    }
  }
  out.value = acc / static_cast<double>(n);
  return out;
}

LossOutput l2_regularizer(const Tensor& params, double lambda) {
  LossOutput out;
  const double norm = l2_norm(params);
  out.value = 0.5 * lambda * norm * norm;
  out.grad = scale(params, lambda);
  return out;
}

}  // namespace medgrad::losses
