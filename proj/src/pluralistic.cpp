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

#include "psod/pluralistic.hpp"

#include <utility>

#include "psod/error.hpp"
#include "psod/parallel.hpp"

namespace psod {

MatchMatrix::MatchMatrix(Eigen::ArrayXXd scores) : scores_(std::move(scores)) {
  if (scores_.rows() < 1 || scores_.cols() < 1) {
    throw ValidationError("match matrix needs K >= 1 and J >= 1");
  }
  if (!((scores_ >= 0.0) && (scores_ <= 1.0)).all()) {
    throw ValidationError("match scores must lie in [0,1]");
  }
}

MatchMatrix MatchMatrix::select_preds(
    std::span<const std::size_t> pred_indices) const {
  Eigen::ArrayXXd sub(static_cast<Eigen::Index>(pred_indices.size()),
                      scores_.cols());
  for (std::size_t r = 0; r < pred_indices.size(); ++r) {
    sub.row(static_cast<Eigen::Index>(r)) =
        scores_.row(static_cast<Eigen::Index>(pred_indices[r]));
  }
  return MatchMatrix(std::move(sub));
}

std::vector<Eigen::Index> MatchMatrix::best_gt_per_pred() const {
  std::vector<Eigen::Index> best(static_cast<std::size_t>(num_preds()), 0);
  for (Eigen::Index k = 0; k < num_preds(); ++k) {
    for (Eigen::Index j = 1; j < num_gts(); ++j) {
      if (scores_(k, j) > scores_(k, best[k])) best[k] = j;
    }
  }
  return best;
}

std::vector<Eigen::Index> MatchMatrix::best_pred_per_gt() const {
  std::vector<Eigen::Index> best(static_cast<std::size_t>(num_gts()), 0);
  for (Eigen::Index j = 0; j < num_gts(); ++j) {
    for (Eigen::Index k = 1; k < num_preds(); ++k) {
      if (scores_(k, j) > scores_(best[j], j)) best[j] = k;
    }
  }
  return best;
}

MatchMatrix match_matrix(const ImageRecord& rec, const MetricConfig& cfg) {
  validate_record(rec);
  const auto k_count = static_cast<Eigen::Index>(rec.preds.size());
  const auto j_count = static_cast<Eigen::Index>(rec.gts.size());
  Eigen::ArrayXXd scores(k_count, j_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (Eigen::Index j = 0; j < j_count; ++j) {
      scores(k, j) = match_score(rec.preds[k].mask, rec.gts[j], cfg);
    }
  }
  return MatchMatrix(std::move(scores));
}

double image_precision(const MatchMatrix& mm) {
  return mm.scores().rowwise().maxCoeff().mean();
}

double image_recall(const MatchMatrix& mm) {
  return mm.scores().colwise().maxCoeff().mean();
}

double f1_harmonic(double ap, double ar) {
  const double s = ap + ar;
  return s > 0 ? 2.0 * ap * ar / s : 0.0;
}

std::vector<std::size_t> kept_prediction_indices(const ImageRecord& rec,
                                                 double tau,
                                                 bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  std::vector<std::size_t> kept;
  if (tau <= 0) {
    for (std::size_t k = 0; k < rec.preds.size(); ++k) kept.push_back(k);
    return kept;
  }
  std::vector<double> scores;
  scores.reserve(rec.preds.size());
  for (const auto& p : rec.preds) {
    if (!p.quality_score) {
      throw ValidationError("record '" + rec.id +
                            "': quality threshold needs a score on every "
                            "prediction");
    }
    scores.push_back(*p.quality_score);
  }
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k] >= tau) kept.push_back(k);
  }
  if (kept.empty()) {
    kept.push_back(select_best_mask(scores));
    if (used_fallback) *used_fallback = true;
  }
  return kept;
}

ImageRecord filter_by_quality(const ImageRecord& rec, double tau) {
  ImageRecord out;
  out.id = rec.id;
  out.gts = rec.gts;
  for (std::size_t k : kept_prediction_indices(rec, tau)) {
    out.preds.push_back(rec.preds[k]);
  }
  return out;
}

namespace {

void aggregate(EvalReport& report) {
  double p = 0, r = 0;
  for (const auto& s : report.per_image) {
    p += s.precision;
    r += s.recall;
  }
  const double n = static_cast<double>(report.per_image.size());
  report.ap = n > 0 ? p / n : 0.0;
  report.ar = n > 0 ? r / n : 0.0;
  report.f1 = f1_harmonic(report.ap, report.ar);
}

}  // namespace

EvalReport evaluate(std::span<const ImageRecord> records, double tau,
                    const MetricConfig& cfg, const EvalOptions& opts) {
  if (records.empty()) throw ValidationError("no records to evaluate");
  cfg.validate();
  EvalReport report;
  report.threshold = tau;
  report.per_image.resize(records.size());
  parallel_for(records.size(), opts.threads, [&](std::size_t i) {
    const ImageRecord& rec = records[i];
    ImageScore& out = report.per_image[i];
    out.id = rec.id;
    out.kept_pred_indices = kept_prediction_indices(rec, tau, &out.fallback);
    ImageRecord kept{rec.id, rec.gts, {}};
    for (std::size_t k : out.kept_pred_indices) kept.preds.push_back(rec.preds[k]);
    const MatchMatrix mm = match_matrix(kept, cfg);
    out.precision = image_precision(mm);
    out.recall = image_recall(mm);
  });
  aggregate(report);
  return report;
}

EvalReport evaluate_precomputed(std::span<const ImageRecord> records,
                                std::span<const MatchMatrix> full_matrices,
                                double tau) {
  if (records.size() != full_matrices.size()) {
    throw ValidationError("one match matrix per record is required");
  }
  if (records.empty()) throw ValidationError("no records to evaluate");
  EvalReport report;
  report.threshold = tau;
  report.per_image.resize(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ImageScore& out = report.per_image[i];
    out.id = records[i].id;
    out.kept_pred_indices =
        kept_prediction_indices(records[i], tau, &out.fallback);
    const MatchMatrix mm = full_matrices[i].select_preds(out.kept_pred_indices);
    out.precision = image_precision(mm);
    out.recall = image_recall(mm);
  }
  aggregate(report);
  return report;
}

std::vector<double> default_taus() {
  std::vector<double> taus;
  for (int i = 0; i < 10; ++i) taus.push_back(i / 10.0);
  return taus;
}

std::vector<CurvePoint> pr_curve(std::span<const ImageRecord> records,
                                 std::span<const double> taus,
                                 const MetricConfig& cfg,
                                 const EvalOptions& opts) {
  if (records.empty()) throw ValidationError("no records to evaluate");
  cfg.validate();
  std::vector<MatchMatrix> full(records.size(),
                                MatchMatrix(Eigen::ArrayXXd::Zero(1, 1)));
  parallel_for(records.size(), opts.threads, [&](std::size_t i) {
    full[i] = match_matrix(records[i], cfg);
  });
  std::vector<CurvePoint> curve;
  curve.reserve(taus.size());
  for (double tau : taus) {
    const EvalReport r = evaluate_precomputed(records, full, tau);
    curve.push_back({tau, r.ap, r.ar, r.f1});
  }
  return curve;
}

CurvePoint best_f1_point(std::span<const CurvePoint> curve) {
  if (curve.empty()) throw ValidationError("empty PR curve");
  CurvePoint best = curve.front();
  best.f1 = f1_harmonic(best.ap, best.ar);
  for (const auto& p : curve.subspan(1)) {
    const double f1 = f1_harmonic(p.ap, p.ar);
    if (f1 > best.f1 || (f1 == best.f1 && p.tau < best.tau)) {
      best = p;
      best.f1 = f1;
    }
  }
  return best;
}

std::size_t select_best_mask(std::span<const double> scores) {
  if (scores.empty()) throw ValidationError("no candidate masks");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::vector<std::size_t> select_best_masks(
    const std::vector<std::vector<double>>& per_image_scores) {
  std::vector<std::size_t> out;
  out.reserve(per_image_scores.size());
  for (const auto& s : per_image_scores) out.push_back(select_best_mask(s));
  return out;
}

}  // namespace psod
