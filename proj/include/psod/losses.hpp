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

// Mask and quality losses evaluated as plain numbers (no gradients).

#ifndef PSOD_LOSSES_HPP
#define PSOD_LOSSES_HPP

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "psod/error.hpp"
#include "psod/saliency_map.hpp"

namespace psod {

template <typename Scalar = double>
struct BasicLossConfig {
  Scalar lambda_ce = Scalar(2.5);
  Scalar dice_smooth = Scalar(1.0);
  Scalar prob_clamp = Scalar(1e-7);

  void validate() const {
    if (!(lambda_ce > 0)) throw ValidationError("lambda_ce must be positive");
    if (!(dice_smooth >= 0)) {
      throw ValidationError("dice_smooth must be non-negative");
    }
    if (!(prob_clamp > 0 && prob_clamp < Scalar(0.5))) {
      throw ValidationError("prob_clamp must lie in (0, 0.5)");
    }
  }
};

using LossConfig = BasicLossConfig<double>;

template <typename Scalar = double>
struct BasicLossBreakdown {
  Scalar ce = 0;
  Scalar dice = 0;
  Scalar total = 0;  // lambda_ce * ce + dice
};

using LossBreakdown = BasicLossBreakdown<double>;

/// Binary cross-entropy against soft targets, averaged over pixels.
template <typename Scalar>
Scalar ce_loss(const BasicSaliencyMap<Scalar>& pred,
               const BasicSaliencyMap<Scalar>& gt,
               const BasicLossConfig<Scalar>& cfg) {
  require_same_shape(pred, gt);
  const auto p =
      pred.array().max(cfg.prob_clamp).min(Scalar(1) - cfg.prob_clamp);
  const auto& t = gt.array();
  return -(t * p.log() + (Scalar(1) - t) * (Scalar(1) - p).log()).mean();
}

/// 1 - (2 sum(p t) + s) / (sum(p^2) + sum(t^2) + s). A vanishing denominator
/// (both maps empty with s = 0) counts as a perfect match.
template <typename Scalar>
Scalar dice_loss(const BasicSaliencyMap<Scalar>& pred,
                 const BasicSaliencyMap<Scalar>& gt,
                 const BasicLossConfig<Scalar>& cfg) {
  require_same_shape(pred, gt);
  const auto& p = pred.array();
  const auto& t = gt.array();
  const Scalar num = Scalar(2) * (p * t).sum() + cfg.dice_smooth;
  const Scalar den = p.square().sum() + t.square().sum() + cfg.dice_smooth;
  if (den == Scalar(0)) return Scalar(0);
  return Scalar(1) - num / den;
}

template <typename Scalar>
BasicLossBreakdown<Scalar> combine_losses(Scalar ce, Scalar dice,
                                          const BasicLossConfig<Scalar>& cfg) {
  return {ce, dice, cfg.lambda_ce * ce + dice};
}

template <typename Scalar>
BasicLossBreakdown<Scalar> mask_loss(const BasicSaliencyMap<Scalar>& pred,
                                     const BasicSaliencyMap<Scalar>& gt,
                                     const BasicLossConfig<Scalar>& cfg) {
  return combine_losses(ce_loss(pred, gt, cfg), dice_loss(pred, gt, cfg), cfg);
}

template <typename Scalar = double>
struct BasicMinLossSelection {
  Eigen::Index pred_index = 0;
  Eigen::Index gt_index = 0;
  BasicLossBreakdown<Scalar> loss;
  /// table[k][j] = mask_loss(preds[k], gts[j]).
  std::vector<std::vector<BasicLossBreakdown<Scalar>>> table;
};

using MinLossSelection = BasicMinLossSelection<double>;

/// (k, j) of the smallest total in a non-empty K x J table; ties go to the
/// lexicographically smallest pair.
template <typename Scalar>
std::pair<Eigen::Index, Eigen::Index> lowest_total(
    const std::vector<std::vector<BasicLossBreakdown<Scalar>>>& table) {
  if (table.empty() || table.front().empty()) {
    throw ValidationError("loss table is empty");
  }
  std::pair<Eigen::Index, Eigen::Index> best{0, 0};
  for (std::size_t k = 0; k < table.size(); ++k) {
    for (std::size_t j = 0; j < table[k].size(); ++j) {
      if (table[k][j].total < table[best.first][best.second].total) {
        best = {static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)};
      }
    }
  }
  return best;
}

/// Scores every (prediction, ground truth) pair and returns the pair with the
/// smallest total; ties go to the lexicographically smallest (k, j).
template <typename Scalar>
BasicMinLossSelection<Scalar> min_loss_select(
    std::span<const BasicSaliencyMap<Scalar>> preds,
    std::span<const BasicSaliencyMap<Scalar>> gts,
    const BasicLossConfig<Scalar>& cfg) {
  if (preds.empty() || gts.empty()) {
    throw ValidationError("min_loss_select needs at least one mask per side");
  }
  BasicMinLossSelection<Scalar> sel;
  sel.table.assign(preds.size(),
                   std::vector<BasicLossBreakdown<Scalar>>(gts.size()));
  for (std::size_t k = 0; k < preds.size(); ++k) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      sel.table[k][j] = mask_loss(preds[k], gts[j], cfg);
    }
  }
  const auto [k, j] = lowest_total(sel.table);
  sel.pred_index = k;
  sel.gt_index = j;
  sel.loss = sel.table[k][j];
  return sel;
}

template <typename Scalar>
BasicMinLossSelection<Scalar> min_loss_select(
    const std::vector<BasicSaliencyMap<Scalar>>& preds,
    const std::vector<BasicSaliencyMap<Scalar>>& gts,
    const BasicLossConfig<Scalar>& cfg) {
  return min_loss_select(std::span<const BasicSaliencyMap<Scalar>>(preds),
                         std::span<const BasicSaliencyMap<Scalar>>(gts), cfg);
}

/// Maps the 4-point human quality level onto the regression target:
/// 1 -> 0.0, 2 -> 0.33, 3 -> 0.67, 4 -> 1.0.
inline double normalize_quality_level(int level) {
  switch (level) {
    case 1: return 0.0;
    case 2: return 0.33;
    case 3: return 0.67;
    case 4: return 1.0;
    default:
      throw ValidationError("quality level must be in 1..4, got " +
                            std::to_string(level));
  }
}

template <typename Scalar>
Scalar mse_quality_loss(std::span<const Scalar> pred_scores,
                        std::span<const Scalar> gt_scores) {
  if (pred_scores.size() != gt_scores.size()) {
    throw ValidationError("score lists differ in length");
  }
  if (pred_scores.empty()) throw ValidationError("score lists are empty");
  Scalar acc = Scalar(0);
  for (std::size_t i = 0; i < pred_scores.size(); ++i) {
    const Scalar d = pred_scores[i] - gt_scores[i];
    acc += d * d;
  }
  return acc / Scalar(pred_scores.size());
}

inline double mse_quality_loss(const std::vector<double>& pred_scores,
                               const std::vector<double>& gt_scores) {
  return mse_quality_loss(std::span<const double>(pred_scores),
                          std::span<const double>(gt_scores));
}

}  // namespace psod

#endif  // PSOD_LOSSES_HPP
