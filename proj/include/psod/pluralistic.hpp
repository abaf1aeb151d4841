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

// Multi-prediction vs. multi-ground-truth evaluation.
//
// For one image with K predictions and J ground truths the match matrix holds
// M(pred_k, gt_j). Precision averages, over predictions, the best match among
// ground truths (row maxima); recall averages, over ground truths, the best
// match among predictions (column maxima). Dataset AP / AR are unweighted
// means over images and F1 is their harmonic mean.
//
// Predictions carry optional quality scores. A quality threshold tau keeps
// predictions scoring >= tau; when none qualify, the single best-scoring one
// is kept so every image still has an output.

#ifndef PSOD_PLURALISTIC_HPP
#define PSOD_PLURALISTIC_HPP

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psod/mask_io.hpp"
#include "psod/metrics.hpp"

namespace psod {

/// K x J grid of match scores in [0,1].
class MatchMatrix {
 public:
  explicit MatchMatrix(Eigen::ArrayXXd scores);

  Eigen::Index num_preds() const { return scores_.rows(); }
  Eigen::Index num_gts() const { return scores_.cols(); }
  const Eigen::ArrayXXd& scores() const { return scores_; }
  double operator()(Eigen::Index k, Eigen::Index j) const {
    return scores_(k, j);
  }

  /// Rows `pred_indices` in the given order.
  MatchMatrix select_preds(std::span<const std::size_t> pred_indices) const;

  /// Best ground truth per prediction / best prediction per ground truth,
  /// lowest index on ties.
  std::vector<Eigen::Index> best_gt_per_pred() const;
  std::vector<Eigen::Index> best_pred_per_gt() const;

 private:
  Eigen::ArrayXXd scores_;
};

MatchMatrix match_matrix(const ImageRecord& rec, const MetricConfig& cfg);

double image_precision(const MatchMatrix& mm);
double image_recall(const MatchMatrix& mm);

/// 2 ap ar / (ap + ar), or 0 when both are 0.
double f1_harmonic(double ap, double ar);

/// Indices of predictions that survive quality threshold `tau`. Sets
/// `used_fallback` when nothing reached tau and the top-1 was kept instead.
std::vector<std::size_t> kept_prediction_indices(const ImageRecord& rec,
                                                 double tau,
                                                 bool* used_fallback = nullptr);

ImageRecord filter_by_quality(const ImageRecord& rec, double tau);

struct ImageScore {
  std::string id;
  double precision = 0;
  double recall = 0;
  std::vector<std::size_t> kept_pred_indices;
  bool fallback = false;
};

struct EvalReport {
  std::vector<ImageScore> per_image;
  double ap = 0;
  double ar = 0;
  double f1 = 0;
  double threshold = 0;
};

struct EvalOptions {
  std::size_t threads = 0;  // 0: auto
};

EvalReport evaluate(std::span<const ImageRecord> records, double tau,
                    const MetricConfig& cfg, const EvalOptions& opts = {});

/// Reduces precomputed full match matrices (one per record) under `tau`.
/// Same result as evaluate() on the same records, without recomputing
/// match scores.
EvalReport evaluate_precomputed(std::span<const ImageRecord> records,
                                std::span<const MatchMatrix> full_matrices,
                                double tau);

struct CurvePoint {
  double tau = 0;
  double ap = 0;
  double ar = 0;
  double f1 = 0;
};

/// 0.0, 0.1, ..., 0.9.
std::vector<double> default_taus();

std::vector<CurvePoint> pr_curve(std::span<const ImageRecord> records,
                                 std::span<const double> taus,
                                 const MetricConfig& cfg,
                                 const EvalOptions& opts = {});

/// Highest F1; ties go to the lowest tau.
CurvePoint best_f1_point(std::span<const CurvePoint> curve);

/// argmax with lowest-index tie-break.
std::size_t select_best_mask(std::span<const double> scores);

std::vector<std::size_t> select_best_masks(
    const std::vector<std::vector<double>>& per_image_scores);

}  // namespace psod

#endif  // PSOD_PLURALISTIC_HPP
