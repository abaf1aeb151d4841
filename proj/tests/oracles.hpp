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

// Test-only reference implementations. Plain loops over std::vector<double>
// pixels; nothing here calls into the library's metric code.

#ifndef PSOD_TESTS_ORACLES_HPP
#define PSOD_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "psod/mask_io.hpp"
#include "psod/saliency_map.hpp"

namespace psod::oracle {

struct Grid {
  int rows = 0, cols = 0;
  std::vector<double> v;  // row-major
  double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
};

inline Grid grid(const SaliencyMap& m) {
  Grid g;
  g.rows = static_cast<int>(m.height());
  g.cols = static_cast<int>(m.width());
  for (Eigen::Index i = 0; i < m.size(); ++i) g.v.push_back(m[i]);
  return g;
}

inline std::vector<double> midpoints() {
  std::vector<double> t;
  for (int k = 1; k <= 255; ++k) t.push_back((k - 0.5) / 255.0);
  return t;
}

struct Counts {
  std::int64_t tp = 0, fp = 0, fn = 0;
};

/// Recounts the confusion matrix from scratch at every threshold.
inline std::vector<Counts> naive_counts(const Grid& pred, const Grid& gt,
                                        const std::vector<double>& thresholds) {
  std::vector<Counts> out;
  for (double t : thresholds) {
    Counts c;
    for (std::size_t i = 0; i < pred.v.size(); ++i) {
      const bool p = pred.v[i] > t;
      const bool g = gt.v[i] > 0.5;
      if (p && g) ++c.tp;
      if (p && !g) ++c.fp;
      if (!p && g) ++c.fn;
    }
    out.push_back(c);
  }
  return out;
}

inline double naive_fbeta(const Counts& c, double beta2) {
  const double p = (c.tp + c.fp) > 0 ? double(c.tp) / double(c.tp + c.fp) : 0.0;
  const double r = (c.tp + c.fn) > 0 ? double(c.tp) / double(c.tp + c.fn) : 0.0;
  const double d = beta2 * p + r;
  return d > 0 ? (1 + beta2) * p * r / d : 0.0;
}

inline std::vector<double> naive_f_curve(const Grid& pred, const Grid& gt,
                                         double beta2 = 0.3) {
  std::vector<double> f;
  for (const auto& c : naive_counts(pred, gt, midpoints())) {
    f.push_back(naive_fbeta(c, beta2));
  }
  return f;
}

inline double naive_f_mean(const Grid& pred, const Grid& gt) {
  const auto f = naive_f_curve(pred, gt);
  double s = 0;
  for (double x : f) s += x;
  return s / f.size();
}

inline double naive_mae(const Grid& a, const Grid& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += std::fabs(a.v[i] - b.v[i]);
  return s / a.v.size();
}

inline double naive_dice(const Grid& p, const Grid& t, double smooth) {
  double pt = 0, pp = 0, tt = 0;
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    pt += p.v[i] * t.v[i];
    pp += p.v[i] * p.v[i];
    tt += t.v[i] * t.v[i];
  }
  const double den = pp + tt + smooth;
  return den == 0 ? 0.0 : 1.0 - (2 * pt + smooth) / den;
}

inline double naive_ce(const Grid& p, const Grid& t, double clamp) {
  double s = 0;
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    const double q = std::min(std::max(p.v[i], clamp), 1.0 - clamp);
    s += t.v[i] * std::log(q) + (1 - t.v[i]) * std::log(1 - q);
  }
  return -s / p.v.size();
}

// Structure measure written straight from the reference recipe.
inline double naive_object(const std::vector<double>& vals, double eps) {
  if (vals.empty()) return 0;
  double m = 0;
  for (double x : vals) m += x;
  m /= vals.size();
  double sd = 0;
  if (vals.size() > 1) {
    for (double x : vals) sd += (x - m) * (x - m);
    sd = std::sqrt(sd / (vals.size() - 1));
  }
  return 2 * m / (m * m + 1 + sd + eps);
}

inline double naive_ssim(const Grid& p, const Grid& g, int r0, int c0, int h,
                         int w, double eps) {
  const double n = double(h) * w;
  double mx = 0, my = 0;
  for (int r = r0; r < r0 + h; ++r)
    for (int c = c0; c < c0 + w; ++c) {
      mx += p.at(r, c);
      my += g.at(r, c);
    }
  mx /= n;
  my /= n;
  double vx = 0, vy = 0, cxy = 0;
  for (int r = r0; r < r0 + h; ++r)
    for (int c = c0; c < c0 + w; ++c) {
      vx += (p.at(r, c) - mx) * (p.at(r, c) - mx);
      vy += (g.at(r, c) - my) * (g.at(r, c) - my);
      cxy += (p.at(r, c) - mx) * (g.at(r, c) - my);
    }
  vx /= (n - 1 + eps);
  vy /= (n - 1 + eps);
  cxy /= (n - 1 + eps);
  const double a = 4 * mx * my * cxy;
  const double b = (mx * mx + my * my) * (vx + vy);
  if (a != 0) return a / b;
  return b == 0 ? 1.0 : 0.0;
}

inline double naive_s_measure(const Grid& p, const Grid& g, double alpha = 0.5,
                              double eps = 1e-8) {
  double mu = 0, mp = 0;
  for (std::size_t i = 0; i < g.v.size(); ++i) {
    mu += g.v[i];
    mp += p.v[i];
  }
  mu /= g.v.size();
  mp /= p.v.size();
  if (mu == 0) return 1 - mp;
  if (mu == 1) return mp;

  std::vector<double> fg, bg;
  for (std::size_t i = 0; i < g.v.size(); ++i) {
    if (g.v[i] > 0.5) fg.push_back(p.v[i]);
    else bg.push_back(1 - p.v[i]);
  }
  const double so = mu * naive_object(fg, eps) + (1 - mu) * naive_object(bg, eps);

  double total = 0, sx = 0, sy = 0;
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) {
      total += g.at(r, c);
      sx += g.at(r, c) * (c + 1);
      sy += g.at(r, c) * (r + 1);
    }
  const int X = static_cast<int>(std::round(sx / total));
  const int Y = static_cast<int>(std::round(sy / total));
  const double area = double(g.rows) * g.cols;
  double sr = 0;
  const int blocks[4][4] = {{0, 0, Y, X},
                            {0, X, Y, g.cols - X},
                            {Y, 0, g.rows - Y, X},
                            {Y, X, g.rows - Y, g.cols - X}};
  for (const auto& b : blocks) {
    if (b[2] <= 0 || b[3] <= 0) continue;
    sr += (double(b[2]) * b[3] / area) * naive_ssim(p, g, b[0], b[1], b[2], b[3], eps);
  }
  return std::max(0.0, alpha * so + (1 - alpha) * sr);
}

/// Per-pixel enhanced alignment, averaged over the midpoint thresholds.
inline double naive_e_mean(const Grid& p, const Grid& g, double eps = 1e-8) {
  const auto ts = midpoints();
  const double n = double(p.v.size());
  double gsum = 0;
  for (double x : g.v) gsum += (x > 0.5);
  double acc = 0;
  for (double t : ts) {
    std::vector<double> b(p.v.size());
    double bsum = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      b[i] = p.v[i] > t ? 1.0 : 0.0;
      bsum += b[i];
    }
    double s = 0;
    if (gsum == 0) {
      for (double x : b) s += 1 - x;
    } else if (gsum == n) {
      for (double x : b) s += x;
    } else {
      const double mg = gsum / n, mb = bsum / n;
      for (std::size_t i = 0; i < b.size(); ++i) {
        const double pg = (g.v[i] > 0.5 ? 1.0 : 0.0) - mg;
        const double pb = b[i] - mb;
        const double al = 2 * pg * pb / (pg * pg + pb * pb + eps);
        s += (al + 1) * (al + 1) / 4;
      }
    }
    acc += std::min(s / (n - 1 + eps), 1.0);
  }
  return acc / ts.size();
}

inline Grid binarized(const Grid& g) {
  Grid b = g;
  for (double& x : b.v) x = x > 0.5 ? 1.0 : 0.0;
  return b;
}

inline double naive_match(const Grid& pred, const Grid& gt) {
  const Grid gb = binarized(gt);
  const double s = naive_s_measure(pred, gb);
  bool any = false;
  for (double x : gb.v) any = any || x > 0;
  if (!any) return s;
  return (naive_f_mean(pred, gb) + s) / 2;
}

// Pluralistic scores by exhaustive enumeration: filter on quality (top-1
// fallback), then scan every (kept prediction, ground truth) pair.
struct NaiveReport {
  double ap = 0, ar = 0, f1 = 0;
};

inline NaiveReport naive_pluralistic(const std::vector<ImageRecord>& recs,
                                     double tau) {
  double ps = 0, rs = 0;
  for (const auto& rec : recs) {
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < rec.preds.size(); ++k) {
      if (tau == 0 || *rec.preds[k].quality_score >= tau) kept.push_back(k);
    }
    if (kept.empty()) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < rec.preds.size(); ++k) {
        if (*rec.preds[k].quality_score > *rec.preds[best].quality_score) best = k;
      }
      kept.push_back(best);
    }
    std::vector<std::vector<double>> m(kept.size(),
                                       std::vector<double>(rec.gts.size()));
    for (std::size_t a = 0; a < kept.size(); ++a)
      for (std::size_t j = 0; j < rec.gts.size(); ++j)
        m[a][j] = naive_match(grid(rec.preds[kept[a]].mask), grid(rec.gts[j]));
    double p = 0, r = 0;
    for (const auto& row : m) p += *std::max_element(row.begin(), row.end());
    for (std::size_t j = 0; j < rec.gts.size(); ++j) {
      double best = 0;
      for (const auto& row : m) best = std::max(best, row[j]);
      r += best;
    }
    ps += p / kept.size();
    rs += r / rec.gts.size();
  }
  NaiveReport out;
  out.ap = ps / recs.size();
  out.ar = rs / recs.size();
  out.f1 = out.ap + out.ar > 0 ? 2 * out.ap * out.ar / (out.ap + out.ar) : 0.0;
  return out;
}

// Random masks ---------------------------------------------------------------

inline SaliencyMap random_binary(std::mt19937_64& rng, int rows, int cols,
                                 double density = 0.5) {
  std::bernoulli_distribution coin(density);
  MaskArray<double> a(rows, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = coin(rng) ? 1.0 : 0.0;
  return SaliencyMap(a);
}

/// Binary with at least one foreground and one background pixel.
inline SaliencyMap random_nondegenerate(std::mt19937_64& rng, int rows,
                                        int cols) {
  std::uniform_real_distribution<double> dens(0.1, 0.9);
  for (;;) {
    SaliencyMap m = random_binary(rng, rows, cols, dens(rng));
    const double mu = m.array().mean();
    if (mu > 0 && mu < 1) return m;
  }
}

/// Soft map on the 8-bit grid, optionally with arbitrary real values.
inline SaliencyMap random_soft(std::mt19937_64& rng, int rows, int cols,
                               bool eight_bit = true) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MaskArray<double> a(rows, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = eight_bit ? byte(rng) / 255.0 : unit(rng);
  }
  return SaliencyMap(a);
}

/// Records with K, J in [1, 3] on rows x cols masks and uniform scores.
inline std::vector<ImageRecord> random_records(std::mt19937_64& rng, int n,
                                               int rows = 16, int cols = 16) {
  std::uniform_int_distribution<int> kd(1, 3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<ImageRecord> recs;
  for (int i = 0; i < n; ++i) {
    ImageRecord rec;
    rec.id = "img" + std::to_string(i);
    const int k = kd(rng), j = kd(rng);
    for (int g = 0; g < j; ++g) rec.gts.push_back(random_nondegenerate(rng, rows, cols));
    for (int p = 0; p < k; ++p) rec.preds.push_back({random_soft(rng, rows, cols), u(rng)});
    recs.push_back(std::move(rec));
  }
  return recs;
}

}  // namespace psod::oracle

#endif  // PSOD_TESTS_ORACLES_HPP
