#pragma once

#include <vector>

#include "medgrad/tensor.hpp"

namespace medgrad::losses {

/// Scalar loss value plus its analytic gradient with respect to the
/// predicted probabilities / scores the op was given.
struct LossOutput {
  double value = 0.0;
  Tensor grad;
};

/// Soft per-class confusion counts computed from probabilities.
struct ClassStats {
  std::vector<double> tp;
  std::vector<double> fn_;
  std::vector<double> fp;
};

/// Per-case annotation mask; index 0 is background, 1..C-1 the anatomies.
struct AnnotationMask {
  std::vector<int> m;
};

/// Mask with background bit derived from the anatomy bits (set iff all
/// anatomies are annotated).
AnnotationMask make_annotation_mask(const std::vector<int>& anatomy_annotated);

/// probs and labels are [C x N]; labels one-hot down the class axis.
/// TP(c) = sum_n p*g, FN(c) = sum_n (1-p)*g, FP(c) = sum_n p*(1-g).
ClassStats class_stats(const Tensor& probs, const Tensor& labels);

/// Soft Dice loss: C - sum_c (TP+eps)/(TP + alpha*FN + beta*FP + eps).
/// With eps == 0 a both-empty class contributes term 1 (zero loss, zero grad).
LossOutput dice_loss(const Tensor& probs, const Tensor& labels,
                     double alpha = 0.5, double beta = 0.5, double eps = 1e-5);

/// -(1/N) sum_c sum_n g*(1-p)^gamma*log(p), p floored at 1e-7.
LossOutput focal_loss(const Tensor& probs, const Tensor& labels,
                      double gamma = 2.0);

/// dice_loss + lambda * focal_loss, gradients combined the same way.
LossOutput hybrid_loss(const Tensor& probs, const Tensor& labels, double lambda,
                       double alpha = 0.5, double beta = 0.5, double eps = 1e-5,
                       double gamma = 2.0);

/// w(c) = 1 / (number of masks annotating class c). Throws naming the class
/// if some class is never annotated.
std::vector<double> annotation_weights(const std::vector<AnnotationMask>& masks);

/// Dice with each per-class term scaled by m(c)*w(c); the constant C is kept.
LossOutput masked_weighted_dice(const Tensor& probs, const Tensor& labels,
                                const AnnotationMask& mask,
                                const std::vector<double>& weights,
                                double alpha = 0.5, double beta = 0.5,
                                double eps = 1e-5);

/// Focal with each per-class term scaled by m(c)*w(c).
LossOutput masked_weighted_focal(const Tensor& probs, const Tensor& labels,
                                 const AnnotationMask& mask,
                                 const std::vector<double>& weights,
                                 double gamma = 2.0);

/// Pixel-wise negative log-likelihood: -(1/N) sum_n log p(true class of n).
LossOutput fcn_nll(const Tensor& probs, const Tensor& labels);

/// Binary cross entropy, mean over elements; p clamped to [1e-7, 1-1e-7].
LossOutput bce(const Tensor& p, const Tensor& y);

/// Smooth-L1 (Huber at delta 1), mean over elements.
LossOutput smooth_l1(const Tensor& pred, const Tensor& target);

/// (lambda/2)*||theta||^2 with gradient lambda*theta. Parameter-norm terms
/// are kept out of the individual losses and funneled through here.
LossOutput l2_regularizer(const Tensor& params, double lambda);

}  // namespace medgrad::losses
