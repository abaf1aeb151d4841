/*
 * Copyright 2026 The psod-eval Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Single-mask saliency metrics: MAE, the F-measure threshold sweep,
// S-measure (structure), mean E-measure (enhanced alignment) and the
// composite match score used by the pluralistic protocol.
//
// Ground-truth arguments named `gt_bin` must be binary. The sweep metrics
// bucket prediction values into a histogram over the configured thresholds,
// so one pass over the pixels serves every threshold.

#ifndef PSOD_METRICS_HPP
#define PSOD_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "psod/error.hpp"
#include "psod/saliency_map.hpp"

namespace psod {

/// The 255 midpoints (k - 0.5) / 255, k = 1..255. A map read from an 8-bit
/// file with byte g exceeds exactly the first g of them.
template <typename Scalar = double>
std::vector<Scalar> midpoint_thresholds() {
  std::vector<Scalar> t(255);
  for (int k = 1; k <= 255; ++k) {
    t[k - 1] = (Scalar(k) - Scalar(0.5)) / Scalar(255);
  }
  return t;
}

template <typename Scalar = double>
struct BasicMetricConfig {
  Scalar beta2 = Scalar(0.3);
  Scalar s_alpha = Scalar(0.5);
  Scalar eps = Scalar(1e-8);
  std::vector<Scalar> thresholds = midpoint_thresholds<Scalar>();

  void validate() const {
    if (!(beta2 > 0)) throw ValidationError("beta2 must be positive");
    if (!(s_alpha >= 0 && s_alpha <= 1)) {
      throw ValidationError("s_alpha must lie in [0,1]");
    }
    if (!(eps > 0)) throw ValidationError("eps must be positive");
    if (thresholds.empty()) throw ValidationError("threshold list is empty");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (!(thresholds[i] > 0 && thresholds[i] < 1)) {
        throw ValidationError("thresholds must lie in (0,1)");
      }
      if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
        throw ValidationError("thresholds must be strictly increasing");
      }
    }
  }
};

using MetricConfig = BasicMetricConfig<double>;

/// Per-threshold confusion counts and the derived P / R / F-beta values.
template <typename Scalar = double>
struct BasicFCurve {
  std::vector<std::int64_t> tp, fp, fn;
  std::vector<Scalar> precision, recall, fbeta;

  std::size_t size() const { return fbeta.size(); }
};

using FCurve = BasicFCurve<double>;

namespace detail {

/// Number of thresholds strictly below `v`, i.e. how many thresholds the
/// pixel survives under the strict `>` binarisation rule.
template <typename Scalar>
std::size_t threshold_bin(const std::vector<Scalar>& thresholds, Scalar v) {
  return static_cast<std::size_t>(
      std::lower_bound(thresholds.begin(), thresholds.end(), v) -
      thresholds.begin());
}

/// Histograms of prediction bins split by the ground-truth label.
struct SplitHistogram {
  std::vector<std::int64_t> positive;  // gt == 1
  std::vector<std::int64_t> negative;  // gt == 0
  std::int64_t n_positive = 0;
  std::int64_t n_negative = 0;
};

template <typename Scalar>
SplitHistogram split_histogram(const BasicSaliencyMap<Scalar>& pred,
                               const BasicSaliencyMap<Scalar>& gt_bin,
                               const std::vector<Scalar>& thresholds) {
  SplitHistogram h;
  h.positive.assign(thresholds.size() + 1, 0);
  h.negative.assign(thresholds.size() + 1, 0);
  const Scalar* p = pred.array().data();
  const Scalar* g = gt_bin.array().data();
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const std::size_t bin = threshold_bin(thresholds, p[i]);
    if (g[i] > Scalar(0.5)) {
      ++h.positive[bin];
    } else {
      ++h.negative[bin];
    }
  }
  h.n_positive = std::accumulate(h.positive.begin(), h.positive.end(),
                                 std::int64_t{0});
  h.n_negative = std::accumulate(h.negative.begin(), h.negative.end(),
                                 std::int64_t{0});
  return h;
}

/// Counts predicted positive at threshold index t: suffix sum from bin t+1.
struct SweepCounts {
  std::vector<std::int64_t> tp, fp;
};

inline SweepCounts sweep_counts(const SplitHistogram& h) {
  const std::size_t n = h.positive.size() - 1;
  SweepCounts c;
  c.tp.assign(n, 0);
  c.fp.assign(n, 0);
  std::int64_t tp = 0, fp = 0;
  for (std::size_t t = n; t-- > 0;) {
    tp += h.positive[t + 1];
    fp += h.negative[t + 1];
    c.tp[t] = tp;
    c.fp[t] = fp;
  }
  return c;
}

template <typename Scalar>
void require_binary(const BasicSaliencyMap<Scalar>& gt_bin) {
  if (!gt_bin.is_binary()) {
    throw ValidationError("ground truth must be binary for this metric");
  }
}

}  // namespace detail

/// Precision, recall and F-beta from confusion counts. An empty prediction
/// has precision 0; F-beta is 0 whenever its denominator vanishes.
template <typename Scalar>
void fbeta_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn,
                       Scalar beta2, Scalar& precision, Scalar& recall,
                       Scalar& fbeta) {
  precision = (tp + fp) > 0 ? Scalar(tp) / Scalar(tp + fp) : Scalar(0);
  recall = (tp + fn) > 0 ? Scalar(tp) / Scalar(tp + fn) : Scalar(0);
  const Scalar denom = beta2 * precision + recall;
  fbeta = denom > 0 ? (Scalar(1) + beta2) * precision * recall / denom
                    : Scalar(0);
}

/// Mean absolute error over soft values.
template <typename Scalar>
Scalar mae(const BasicSaliencyMap<Scalar>& pred,
           const BasicSaliencyMap<Scalar>& gt) {
  require_same_shape(pred, gt);
  return (pred.array() - gt.array()).abs().mean();
}

/// Precision / recall / F-beta of binarize(pred, t) against `gt_bin` for each
/// configured threshold. Throws DegenerateGroundTruth if gt has no foreground.
template <typename Scalar>
BasicFCurve<Scalar> f_curve(const BasicSaliencyMap<Scalar>& pred,
                            const BasicSaliencyMap<Scalar>& gt_bin,
                            const BasicMetricConfig<Scalar>& cfg) {
  require_same_shape(pred, gt_bin);
  detail::require_binary(gt_bin);
  const auto hist = detail::split_histogram(pred, gt_bin, cfg.thresholds);
  if (hist.n_positive == 0) {
    throw DegenerateGroundTruth("F-measure undefined: ground truth is empty");
  }
  const auto counts = detail::sweep_counts(hist);
  const std::size_t n = cfg.thresholds.size();
  BasicFCurve<Scalar> curve;
  curve.tp = counts.tp;
  curve.fp = counts.fp;
  curve.fn.resize(n);
  curve.precision.resize(n);
  curve.recall.resize(n);
  curve.fbeta.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    curve.fn[t] = hist.n_positive - curve.tp[t];
    fbeta_from_counts(curve.tp[t], curve.fp[t], curve.fn[t], cfg.beta2,
                      curve.precision[t], curve.recall[t], curve.fbeta[t]);
  }
  return curve;
}

template <typename Scalar>
Scalar f_mean(const BasicFCurve<Scalar>& curve) {
  if (curve.fbeta.empty()) throw ValidationError("empty F-curve");
  return std::accumulate(curve.fbeta.begin(), curve.fbeta.end(), Scalar(0)) /
         Scalar(curve.fbeta.size());
}

template <typename Scalar>
Scalar f_max(const BasicFCurve<Scalar>& curve) {
  if (curve.fbeta.empty()) throw ValidationError("empty F-curve");
  return *std::max_element(curve.fbeta.begin(), curve.fbeta.end());
}

namespace detail {

// Object-level similarity of the values selected by `mask`:
// 2 * mean / (mean^2 + 1 + std + eps), sample standard deviation.
template <typename Scalar>
Scalar object_similarity(const MaskArray<Scalar>& values,
                         const MaskArray<bool>& mask, Scalar eps) {
  const Eigen::Index n = mask.count();
  if (n == 0) return Scalar(0);
  const Scalar mean =
      mask.select(values, Scalar(0)).sum() / static_cast<Scalar>(n);
  Scalar sd = Scalar(0);
  if (n > 1) {
    const Scalar ss = mask.select(values - mean, Scalar(0)).square().sum();
    sd = std::sqrt(ss / static_cast<Scalar>(n - 1));
  }
  return Scalar(2) * mean / (mean * mean + Scalar(1) + sd + eps);
}

// SSIM-style agreement of one block. When the numerator is nonzero the
// denominator is strictly positive, so it is used unguarded.
template <typename DerivedX, typename DerivedY, typename Scalar>
Scalar block_similarity(const Eigen::ArrayBase<DerivedX>& x,
                        const Eigen::ArrayBase<DerivedY>& y, Scalar eps) {
  const Scalar n = static_cast<Scalar>(x.size());
  const Scalar mx = x.mean();
  const Scalar my = y.mean();
  const Scalar var_x = (x - mx).square().sum() / (n - Scalar(1) + eps);
  const Scalar var_y = (y - my).square().sum() / (n - Scalar(1) + eps);
  const Scalar cov = ((x - mx) * (y - my)).sum() / (n - Scalar(1) + eps);
  const Scalar num = Scalar(4) * mx * my * cov;
  const Scalar den = (mx * mx + my * my) * (var_x + var_y);
  if (num != Scalar(0)) return num / den;
  return den == Scalar(0) ? Scalar(1) : Scalar(0);
}

template <typename Scalar>
Scalar object_score(const BasicSaliencyMap<Scalar>& pred,
                    const BasicSaliencyMap<Scalar>& gt_bin, Scalar eps) {
  const MaskArray<bool> fg = gt_bin.array() > Scalar(0.5);
  const MaskArray<bool> bg = !fg;
  const Scalar mu = gt_bin.array().mean();
  const MaskArray<Scalar> inverse = Scalar(1) - pred.array();
  return mu * object_similarity(pred.array(), fg, eps) +
         (Scalar(1) - mu) * object_similarity(inverse, bg, eps);
}

template <typename Scalar>
Scalar region_score(const BasicSaliencyMap<Scalar>& pred,
                    const BasicSaliencyMap<Scalar>& gt_bin, Scalar eps) {
  const auto& p = pred.array();
  const auto& g = gt_bin.array();
  const Eigen::Index rows = g.rows();
  const Eigen::Index cols = g.cols();

  // Foreground centroid, 1-based and rounded half away from zero; it becomes
  // the exclusive end of the top/left blocks.
  const Scalar total = g.sum();
  Eigen::Index cx, cy;
  if (total == Scalar(0)) {
    cx = static_cast<Eigen::Index>(std::round(Scalar(cols) / 2));
    cy = static_cast<Eigen::Index>(std::round(Scalar(rows) / 2));
  } else {
    const auto col_idx =
        Eigen::Array<Scalar, 1, Eigen::Dynamic>::LinSpaced(cols, 1, Scalar(cols));
    const auto row_idx =
        Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(rows, 1, Scalar(rows));
    cx = static_cast<Eigen::Index>(
        std::round((g.colwise().sum() * col_idx).sum() / total));
    cy = static_cast<Eigen::Index>(
        std::round((g.rowwise().sum() * row_idx).sum() / total));
  }

  const Scalar area = Scalar(rows * cols);
  Scalar score = Scalar(0);
  auto add_block = [&](Eigen::Index r0, Eigen::Index c0, Eigen::Index h,
                       Eigen::Index w) {
    if (h <= 0 || w <= 0) return;
    const Scalar weight = Scalar(h * w) / area;
    score += weight * block_similarity(p.block(r0, c0, h, w),
                                       g.block(r0, c0, h, w), eps);
  };
  add_block(0, 0, cy, cx);
  add_block(0, cx, cy, cols - cx);
  add_block(cy, 0, rows - cy, cx);
  add_block(cy, cx, rows - cy, cols - cx);
  return score;
}

}  // namespace detail

/// Structure measure alpha * So + (1 - alpha) * Sr. Empty ground truth
/// scores 1 - mean(pred); full ground truth scores mean(pred).
template <typename Scalar>
Scalar s_measure(const BasicSaliencyMap<Scalar>& pred,
                 const BasicSaliencyMap<Scalar>& gt_bin,
                 const BasicMetricConfig<Scalar>& cfg) {
  require_same_shape(pred, gt_bin);
  detail::require_binary(gt_bin);
  const Scalar mu = gt_bin.array().mean();
  if (mu == Scalar(0)) return Scalar(1) - pred.array().mean();
  if (mu == Scalar(1)) return pred.array().mean();
  const Scalar s = cfg.s_alpha * detail::object_score(pred, gt_bin, cfg.eps) +
                   (Scalar(1) - cfg.s_alpha) *
                       detail::region_score(pred, gt_bin, cfg.eps);
  return std::max(s, Scalar(0));
}

/// Enhanced-alignment score averaged over the configured thresholds. Each
/// per-threshold score is capped at 1.
template <typename Scalar>
Scalar e_measure_mean(const BasicSaliencyMap<Scalar>& pred,
                      const BasicSaliencyMap<Scalar>& gt_bin,
                      const BasicMetricConfig<Scalar>& cfg) {
  require_same_shape(pred, gt_bin);
  detail::require_binary(gt_bin);
  const auto hist = detail::split_histogram(pred, gt_bin, cfg.thresholds);
  const auto counts = detail::sweep_counts(hist);
  const Scalar n = Scalar(pred.size());
  const Scalar norm = n - Scalar(1) + cfg.eps;

  // With a binary map and binary gt every pixel falls in one of four cells,
  // so the pixel sum reduces to four weighted terms.
  auto enhanced = [&](Scalar phi_gt, Scalar phi_b) {
    const Scalar align = Scalar(2) * phi_gt * phi_b /
                         (phi_gt * phi_gt + phi_b * phi_b + cfg.eps);
    return (align + Scalar(1)) * (align + Scalar(1)) / Scalar(4);
  };

  Scalar acc = Scalar(0);
  for (std::size_t t = 0; t < cfg.thresholds.size(); ++t) {
    const Scalar tp = Scalar(counts.tp[t]);
    const Scalar fp = Scalar(counts.fp[t]);
    const Scalar fn = Scalar(hist.n_positive - counts.tp[t]);
    const Scalar tn = Scalar(hist.n_negative - counts.fp[t]);
    Scalar sum;
    if (hist.n_positive == 0) {
      sum = tn + fn;  // sum of (1 - B)
    } else if (hist.n_negative == 0) {
      sum = tp + fp;  // sum of B
    } else {
      const Scalar mu_gt = Scalar(hist.n_positive) / n;
      const Scalar mu_b = (tp + fp) / n;
      sum = tp * enhanced(Scalar(1) - mu_gt, Scalar(1) - mu_b) +
            fp * enhanced(-mu_gt, Scalar(1) - mu_b) +
            fn * enhanced(Scalar(1) - mu_gt, -mu_b) +
            tn * enhanced(-mu_gt, -mu_b);
    }
    acc += std::min(sum / norm, Scalar(1));
  }
  return acc / Scalar(cfg.thresholds.size());
}

/// Match score between one prediction and one (possibly soft) ground truth:
/// mean of F-mean and S-measure against binarize(gt, 0.5). An empty
/// binarised ground truth falls back to the S-measure alone.
template <typename Scalar>
Scalar match_score(const BasicSaliencyMap<Scalar>& pred,
                   const BasicSaliencyMap<Scalar>& gt,
                   const BasicMetricConfig<Scalar>& cfg) {
  require_same_shape(pred, gt);
  const auto gt_bin = binarize(gt, Scalar(0.5));
  const Scalar s = s_measure(pred, gt_bin, cfg);
  if (!(gt_bin.array() > Scalar(0)).any()) return s;
  return (f_mean(f_curve(pred, gt_bin, cfg)) + s) / Scalar(2);
}

}  // namespace psod

#endif  // PSOD_METRICS_HPP
