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

#include "psod/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "psod/conventional.hpp"

namespace psod {
namespace {

SaliencyMap Map(int rows, int cols, std::vector<double> v) {
  return SaliencyMap(Eigen::Map<MaskArray<double>>(v.data(), rows, cols));
}

// 8x8 mask with a filled square at rows/cols [2,6).
SaliencyMap Square() {
  MaskArray<double> a = MaskArray<double>::Zero(8, 8);
  a.block(2, 2, 4, 4).setOnes();
  return SaliencyMap(a);
}

TEST(MetricConfigTest, DefaultsAndValidation) {
  MetricConfig cfg;
  EXPECT_DOUBLE_EQ(cfg.beta2, 0.3);
  EXPECT_DOUBLE_EQ(cfg.s_alpha, 0.5);
  EXPECT_DOUBLE_EQ(cfg.eps, 1e-8);
  ASSERT_EQ(cfg.thresholds.size(), 255u);
  EXPECT_DOUBLE_EQ(cfg.thresholds.front(), 0.5 / 255);
  EXPECT_DOUBLE_EQ(cfg.thresholds.back(), 254.5 / 255);
  EXPECT_NO_THROW(cfg.validate());

  MetricConfig bad = cfg;
  bad.thresholds = {0.2, 0.2};
  EXPECT_THROW(bad.validate(), ValidationError);
  bad.thresholds = {0.0, 0.5};
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = cfg;
  bad.beta2 = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(MaeTest, Examples) {
  const auto gt = Square();
  EXPECT_EQ(mae(gt, gt), 0.0);
  const SaliencyMap complement(1.0 - gt.array());
  EXPECT_DOUBLE_EQ(mae(complement, gt), 1.0);
  EXPECT_DOUBLE_EQ(mae(Map(2, 2, {1, 0, 0.5, 0.5}), Map(2, 2, {1, 0, 0, 1})),
                   0.25);
  EXPECT_THROW(mae(Map(1, 2, {0, 0}), Map(2, 1, {0, 0})), DimensionMismatch);
}

TEST(FCurveTest, IdentityIsOneEverywhere) {
  const MetricConfig cfg;
  const auto gt = Square();
  const FCurve c = f_curve(gt, gt, cfg);
  ASSERT_EQ(c.size(), 255u);
  for (std::size_t t = 0; t < c.size(); ++t) {
    EXPECT_EQ(c.precision[t], 1.0);
    EXPECT_EQ(c.recall[t], 1.0);
    EXPECT_EQ(c.fbeta[t], 1.0);
  }
  EXPECT_EQ(f_mean(c), 1.0);
  EXPECT_EQ(f_max(c), 1.0);
}

TEST(FCurveTest, AllOnesAgainstHalfForeground) {
  const MetricConfig cfg;
  const auto gt = Map(2, 2, {1, 1, 0, 0});
  const FCurve c = f_curve(SaliencyMap::Constant(2, 2, 1.0), gt, cfg);
  // 1.3 * 0.5 / (0.3 * 0.5 + 1) = 0.65 / 1.15
  const double expected = 0.65 / 1.15;
  for (std::size_t t = 0; t < c.size(); ++t) {
    EXPECT_DOUBLE_EQ(c.precision[t], 0.5);
    EXPECT_DOUBLE_EQ(c.recall[t], 1.0);
    EXPECT_NEAR(c.fbeta[t], expected, 1e-15);
  }
  EXPECT_NEAR(expected, 0.5652, 5e-5);
  EXPECT_NEAR(f_mean(c), expected, 1e-12);
  EXPECT_NEAR(f_max(c), expected, 1e-15);
}

TEST(FCurveTest, EmptyPredictionScoresZero) {
  const FCurve c = f_curve(SaliencyMap::Zero(8, 8), Square(), MetricConfig{});
  for (std::size_t t = 0; t < c.size(); ++t) {
    EXPECT_EQ(c.precision[t], 0.0);
    EXPECT_EQ(c.fbeta[t], 0.0);
  }
}

TEST(FCurveTest, Errors) {
  const MetricConfig cfg;
  EXPECT_THROW(f_curve(Square(), SaliencyMap::Zero(8, 8), cfg),
               DegenerateGroundTruth);
  EXPECT_THROW(f_curve(Square(), SaliencyMap::Zero(4, 4), cfg),
               DimensionMismatch);
  EXPECT_THROW(f_curve(Square(), SaliencyMap::Constant(8, 8, 0.5), cfg),
               ValidationError);
}

TEST(FCurveTest, Reductions) {
  FCurve c;
  c.fbeta = {0.2, 0.8};
  EXPECT_DOUBLE_EQ(f_mean(c), 0.5);
  EXPECT_DOUBLE_EQ(f_max(c), 0.8);
  c.fbeta = {0.5652, 0.5652, 0.5652};
  EXPECT_DOUBLE_EQ(f_mean(c), 0.5652);
  EXPECT_DOUBLE_EQ(f_max(c), 0.5652);
  EXPECT_THROW(f_mean(FCurve{}), ValidationError);
}

TEST(FCurveTest, MatchesNaiveRecount) {
  std::mt19937_64 rng(7);
  const MetricConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const auto pred = oracle::random_soft(rng, 16, 16, trial % 2 == 0);
    const auto gt = oracle::random_nondegenerate(rng, 16, 16);
    const FCurve c = f_curve(pred, gt, cfg);
    const auto naive =
        oracle::naive_counts(oracle::grid(pred), oracle::grid(gt), cfg.thresholds);
    for (std::size_t t = 0; t < c.size(); ++t) {
      ASSERT_EQ(c.tp[t], naive[t].tp);
      ASSERT_EQ(c.fp[t], naive[t].fp);
      ASSERT_EQ(c.fn[t], naive[t].fn);
      ASSERT_NEAR(c.fbeta[t], oracle::naive_fbeta(naive[t], 0.3), 1e-12);
    }
  }
}

TEST(FCurveTest, CustomThresholds) {
  MetricConfig cfg;
  cfg.thresholds = {0.25, 0.75};
  const auto pred = Map(1, 4, {0.1, 0.5, 0.9, 0.75});
  const auto gt = Map(1, 4, {0, 1, 1, 1});
  const FCurve c = f_curve(pred, gt, cfg);
  // t=0.25: predicted {0.5, 0.9, 0.75} -> tp 3; t=0.75: only 0.9 (strict >).
  EXPECT_EQ(c.tp, (std::vector<std::int64_t>{3, 1}));
  EXPECT_EQ(c.fp, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(c.fn, (std::vector<std::int64_t>{0, 2}));
}

TEST(SMeasureTest, Examples) {
  const MetricConfig cfg;
  const auto gt = Square();
  EXPECT_GE(s_measure(gt, gt, cfg), 1.0 - 1e-6);
  EXPECT_LE(s_measure(gt, gt, cfg), 1.0);
  EXPECT_NEAR(s_measure(SaliencyMap::Constant(8, 8, 0.3),
                        SaliencyMap::Zero(8, 8), cfg),
              0.7, 1e-15);
  EXPECT_EQ(s_measure(SaliencyMap::Constant(8, 8, 1.0),
                      SaliencyMap::Constant(8, 8, 1.0), cfg),
            1.0);
  EXPECT_EQ(s_measure(SaliencyMap::Zero(8, 8), SaliencyMap::Zero(8, 8), cfg),
            1.0);
}

TEST(SMeasureTest, SmallForegroundIdentity) {
  // One foreground pixel in a large map: every region block is either
  // constant or an exact copy, so the score stays at 1.
  MaskArray<double> a = MaskArray<double>::Zero(128, 128);
  a(70, 40) = 1;
  const SaliencyMap m(a);
  EXPECT_GE(s_measure(m, m, MetricConfig{}), 1.0 - 1e-6);
}

TEST(SMeasureTest, MatchesNaiveImplementation) {
  std::mt19937_64 rng(11);
  const MetricConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 5 + trial % 13, cols = 4 + (trial * 7) % 17;
    const auto pred = oracle::random_soft(rng, rows, cols, trial % 3 != 0);
    const auto gt = oracle::random_nondegenerate(rng, rows, cols);
    ASSERT_NEAR(s_measure(pred, gt, cfg),
                oracle::naive_s_measure(oracle::grid(pred), oracle::grid(gt)),
                1e-12);
  }
}

TEST(SMeasureTest, WorsePredictionScoresLower) {
  const MetricConfig cfg;
  const auto gt = Square();
  MaskArray<double> shifted = MaskArray<double>::Zero(8, 8);
  shifted.block(3, 3, 4, 4).setOnes();
  EXPECT_LT(s_measure(SaliencyMap(shifted), gt, cfg), s_measure(gt, gt, cfg));
}

TEST(EMeasureTest, Examples) {
  const MetricConfig cfg;
  const auto gt = Square();
  EXPECT_GE(e_measure_mean(gt, gt, cfg), 1.0 - 1e-4);
  EXPECT_LE(e_measure_mean(gt, gt, cfg), 1.0);
  EXPECT_NEAR(
      e_measure_mean(SaliencyMap::Zero(8, 8), SaliencyMap::Zero(8, 8), cfg),
      1.0, 1e-12);
  EXPECT_NEAR(e_measure_mean(SaliencyMap::Constant(8, 8, 1.0),
                             SaliencyMap::Zero(8, 8), cfg),
              0.0, 1e-12);
}

TEST(EMeasureTest, TinyForegroundIdentityStaysBelowOne) {
  MaskArray<double> a = MaskArray<double>::Zero(64, 64);
  a(10, 50) = 1;
  const SaliencyMap m(a);
  const double e = e_measure_mean(m, m, MetricConfig{});
  EXPECT_LT(e, 0.99);
  EXPECT_NEAR(e, oracle::naive_e_mean(oracle::grid(m), oracle::grid(m)), 1e-12);
}

TEST(EMeasureTest, MatchesPerPixelOracle) {
  std::mt19937_64 rng(13);
  const MetricConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    const auto pred = oracle::random_soft(rng, 12, 14, trial % 2 == 0);
    const auto gt = trial % 10 == 0 ? SaliencyMap::Zero(12, 14)
                                    : oracle::random_nondegenerate(rng, 12, 14);
    ASSERT_NEAR(e_measure_mean(pred, gt, cfg),
                oracle::naive_e_mean(oracle::grid(pred), oracle::grid(gt)),
                1e-12);
  }
}

TEST(MatchScoreTest, Examples) {
  const MetricConfig cfg;
  const auto gt = Square();
  EXPECT_GE(match_score(gt, gt, cfg), 1.0 - 1e-6);
  EXPECT_EQ(match_score(SaliencyMap::Zero(8, 8), SaliencyMap::Zero(8, 8), cfg),
            1.0);
  // Average of the two components.
  std::mt19937_64 rng(3);
  const auto pred = oracle::random_soft(rng, 8, 8);
  const double expected =
      (f_mean(f_curve(pred, gt, cfg)) + s_measure(pred, gt, cfg)) / 2;
  EXPECT_DOUBLE_EQ(match_score(pred, gt, cfg), expected);
}

TEST(MatchScoreTest, SoftGroundTruthIsBinarizedAtHalf) {
  const MetricConfig cfg;
  MaskArray<double> soft = Square().array() * 0.9;
  soft(0, 0) = 0.5;  // strict >: stays background
  EXPECT_DOUBLE_EQ(match_score(Square(), SaliencyMap(soft), cfg),
                   match_score(Square(), Square(), cfg));
}

TEST(MatchScoreTest, MatchesNaiveComposition) {
  std::mt19937_64 rng(17);
  const MetricConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const auto pred = oracle::random_soft(rng, 10, 10);
    const auto gt = oracle::random_soft(rng, 10, 10);
    ASSERT_NEAR(match_score(pred, gt, cfg),
                oracle::naive_match(oracle::grid(pred), oracle::grid(gt)), 1e-12);
  }
}

// Property checks over random inputs.
TEST(MetricPropertiesTest, BoundsSymmetryAndOrdering) {
  std::mt19937_64 rng(19);
  const MetricConfig cfg;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pred = oracle::random_soft(rng, 9, 11, trial % 2 == 0);
    const auto gt = oracle::random_nondegenerate(rng, 9, 11);
    const FCurve c = f_curve(pred, gt, cfg);
    for (double v : {mae(pred, gt), f_mean(c), f_max(c), s_measure(pred, gt, cfg),
                     e_measure_mean(pred, gt, cfg), match_score(pred, gt, cfg)}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    for (std::size_t t = 0; t < c.size(); ++t) {
      ASSERT_GE(c.precision[t], 0.0);
      ASSERT_LE(c.precision[t], 1.0);
      ASSERT_GE(c.recall[t], 0.0);
      ASSERT_LE(c.recall[t], 1.0);
    }
    ASSERT_GE(f_max(c), f_mean(c));
    ASSERT_DOUBLE_EQ(mae(pred, gt), mae(gt, pred));
  }
}

TEST(MetricPropertiesTest, PixelPermutationInvariance) {
  std::mt19937_64 rng(23);
  const MetricConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const auto pred = oracle::random_soft(rng, 8, 8);
    const auto gt = oracle::random_nondegenerate(rng, 8, 8);
    std::vector<int> perm(64);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    MaskArray<double> pp(8, 8), gp(8, 8);
    for (int i = 0; i < 64; ++i) {
      pp.data()[i] = pred[perm[i]];
      gp.data()[i] = gt[perm[i]];
    }
    const SaliencyMap pred2(pp), gt2(gp);
    EXPECT_NEAR(mae(pred, gt), mae(pred2, gt2), 1e-15);
    const FCurve a = f_curve(pred, gt, cfg), b = f_curve(pred2, gt2, cfg);
    EXPECT_EQ(a.tp, b.tp);
    EXPECT_EQ(a.fp, b.fp);
    EXPECT_EQ(a.fbeta, b.fbeta);
    EXPECT_NEAR(e_measure_mean(pred, gt, cfg), e_measure_mean(pred2, gt2, cfg),
                1e-15);
  }
}

TEST(MetricPropertiesTest, SinglePixelFlipChangesMaeByDeltaOverN) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto gt = oracle::random_nondegenerate(rng, 6, 7);
    const double before = mae(gt, gt);
    MaskArray<double> p = gt.array();
    const Eigen::Index i = static_cast<Eigen::Index>(rng() % 42);
    p.data()[i] = 1.0 - p.data()[i];
    EXPECT_NEAR(mae(SaliencyMap(p), gt) - before, 1.0 / 42, 1e-15);
  }
}

TEST(MetricPropertiesTest, SelfMatchOfBinaryMasks) {
  std::mt19937_64 rng(31);
  const MetricConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_nondegenerate(rng, 4 + trial % 20, 5 + trial % 9);
    ASSERT_GE(match_score(m, m, cfg), 1.0 - 1e-6);
    ASSERT_EQ(f_mean(f_curve(m, m, cfg)), 1.0);
  }
}

TEST(MetricsFloatTest, TemplatesInstantiateForFloat) {
  BasicMetricConfig<float> cfg;
  MaskArray<float> a = MaskArray<float>::Zero(8, 8);
  a.block(2, 2, 4, 4).setOnes();
  const BasicSaliencyMap<float> m(a);
  EXPECT_EQ(f_mean(f_curve(m, m, cfg)), 1.0f);
  EXPECT_NEAR(s_measure(m, m, cfg), 1.0f, 1e-5f);
  EXPECT_EQ(mae(m, m), 0.0f);
}

ImageRecord Rec(std::string id, SaliencyMap pred, SaliencyMap gt) {
  return ImageRecord{std::move(id), {std::move(gt)}, {{std::move(pred), {}}}};
}

TEST(ConventionalEvalTest, IdentityDataset) {
  const auto gt = Square();
  const std::vector<ImageRecord> recs = {Rec("a", gt, gt), Rec("b", gt, gt)};
  const auto table = conventional_eval(recs, MetricConfig{});
  EXPECT_EQ(table.mean.f_max, 1.0);
  EXPECT_EQ(table.mean.f_avg, 1.0);
  EXPECT_GE(table.mean.s_measure, 1.0 - 1e-6);
  EXPECT_EQ(table.mean.mae, 0.0);
}

TEST(ConventionalEvalTest, MeansAndCsv) {
  // MAE 0.1 and 0.3 on a 10-pixel strip.
  MaskArray<double> g = MaskArray<double>::Zero(1, 10);
  g.leftCols(5).setOnes();
  MaskArray<double> p1 = g, p2 = g;
  p1(0, 9) = 1;
  p2(0, 9) = 1;
  p2(0, 8) = 1;
  p2(0, 0) = 0;
  const std::vector<ImageRecord> recs = {
      Rec("x", SaliencyMap(p1), SaliencyMap(g)),
      Rec("y", SaliencyMap(p2), SaliencyMap(g))};
  const auto table = conventional_eval(recs, MetricConfig{});
  EXPECT_NEAR(table.rows[0].mae, 0.1, 1e-15);
  EXPECT_NEAR(table.rows[1].mae, 0.3, 1e-15);
  EXPECT_NEAR(table.mean.mae, 0.2, 1e-15);

  const auto one = conventional_eval(std::span(recs).first(1), MetricConfig{});
  EXPECT_EQ(one.mean.f_max, one.rows[0].f_max);
  EXPECT_EQ(one.mean.s_measure, one.rows[0].s_measure);

  const std::string csv = conventional_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,f_max,f_avg,s_measure,mae");
  EXPECT_NE(csv.find("\nx,"), std::string::npos);
  EXPECT_NE(csv.find("\nMEAN,"), std::string::npos);
  EXPECT_NE(csv.find(",0.2000\n"), std::string::npos);
}

}  // namespace
}  // namespace psod
