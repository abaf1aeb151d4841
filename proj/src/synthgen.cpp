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

#include "psod/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "psod/error.hpp"
#include "psod/parallel.hpp"

namespace psod {
namespace fs = std::filesystem;

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t SeededRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) std::swap(lo, hi);
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

std::size_t SeededRng::index(std::size_t n) {
  return static_cast<std::size_t>(engine_() % n);
}

double SeededRng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

// Scenes --------------------------------------------------------------------

namespace {

using Array = MaskArray<double>;

struct Box {
  Eigen::Index x0, y0, x1, y1;  // inclusive

  // At least two background pixels between the boxes along some axis.
  bool separated_from(const Box& o) const {
    return x1 + 3 <= o.x0 || o.x1 + 3 <= x0 || y1 + 3 <= o.y0 ||
           o.y1 + 3 <= y0;
  }
};

Array rasterize(Shape shape, Eigen::Index width, Eigen::Index height,
                Eigen::Index cx, Eigen::Index cy, Eigen::Index half_w,
                Eigen::Index half_h) {
  Array a = Array::Zero(height, width);
  const double r2 = static_cast<double>(half_w * half_w);
  const double inner2 = r2 / 4.0;
  for (Eigen::Index y = cy - half_h; y <= cy + half_h; ++y) {
    for (Eigen::Index x = cx - half_w; x <= cx + half_w; ++x) {
      const double dx = static_cast<double>(x - cx);
      const double dy = static_cast<double>(y - cy);
      const double d2 = dx * dx + dy * dy;
      bool on = false;
      switch (shape) {
        case Shape::kRectangle: on = true; break;
        case Shape::kDisk: on = d2 <= r2; break;
        case Shape::kRing: on = d2 <= r2 && d2 > inner2; break;
      }
      if (on) a(y, x) = 1.0;
    }
  }
  return a;
}

}  // namespace

void SceneSpec::validate() const {
  if (n_objects != 2 && n_objects != 3) {
    throw ValidationError("scenes hold 2 or 3 objects");
  }
  if (width < 8 || height < 8) {
    throw ValidationError("scene must be at least 8x8");
  }
  if (!shapes.empty() && static_cast<int>(shapes.size()) != n_objects) {
    throw ValidationError("one shape per object is required");
  }
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  SeededRng rng(spec.seed);
  const double image_area = static_cast<double>(spec.width * spec.height);
  const double min_area = 0.01 * image_area;
  // A ring of outer radius R covers about 0.75 pi R^2; size for the worst case.
  const auto r_min = std::max<Eigen::Index>(
      4, static_cast<Eigen::Index>(
             std::ceil(std::sqrt(min_area / (0.75 * M_PI)))) + 1);
  const auto r_max = std::max<Eigen::Index>(
      r_min, std::min(spec.width, spec.height) / 5);
  if (2 * r_max + 1 > std::min(spec.width, spec.height)) {
    throw ValidationError("scene too small for the minimum object size");
  }

  std::vector<Shape> shapes = spec.shapes;
  if (shapes.empty()) {
    for (int i = 0; i < spec.n_objects; ++i) {
      shapes.push_back(static_cast<Shape>(rng.index(3)));
    }
  }

  constexpr int kMaxAttempts = 1000;
  std::vector<Box> boxes;
  std::vector<Array> objects;
  for (int i = 0; i < spec.n_objects; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Eigen::Index r = rng.uniform_int(r_min, r_max);
      Eigen::Index hw = r, hh = r;
      if (shapes[i] == Shape::kRectangle) {
        hh = rng.uniform_int((r + 1) / 2, r);
        if (rng.index(2) == 1) std::swap(hw, hh);
      }
      const Eigen::Index cx = rng.uniform_int(hw, spec.width - 1 - hw);
      const Eigen::Index cy = rng.uniform_int(hh, spec.height - 1 - hh);
      const Box box{cx - hw, cy - hh, cx + hw, cy + hh};
      if (!std::all_of(boxes.begin(), boxes.end(),
                       [&](const Box& b) { return box.separated_from(b); })) {
        continue;
      }
      Array a = rasterize(shapes[i], spec.width, spec.height, cx, cy, hw, hh);
      if (a.sum() < min_area) continue;
      boxes.push_back(box);
      objects.push_back(std::move(a));
      placed = true;
    }
    if (!placed) {
      throw ValidationError("could not place object " + std::to_string(i) +
                            " without overlap");
    }
  }

  Scene scene;
  for (const auto& o : objects) scene.objects.emplace_back(o);

  auto union_of = [&](std::initializer_list<std::size_t> idx) {
    Array u = Array::Zero(spec.height, spec.width);
    for (std::size_t i : idx) u = u.max(objects[i]);
    return SaliencyMap(u);
  };

  if (spec.n_objects == 2) {
    scene.gts = {scene.objects[0], scene.objects[1], union_of({0, 1})};
    return scene;
  }

  std::vector<double> area(3);
  for (std::size_t i = 0; i < 3; ++i) area[i] = objects[i].sum();
  std::size_t largest = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (area[i] > area[largest]) largest = i;
  }
  // Pairs in lexicographic order: (0,1), (0,2), (1,2).
  const std::size_t pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  std::size_t best_pair = 0;
  for (std::size_t p = 1; p < 3; ++p) {
    if (area[pairs[p][0]] + area[pairs[p][1]] >
        area[pairs[best_pair][0]] + area[pairs[best_pair][1]]) {
      best_pair = p;
    }
  }
  const SaliencyMap pair_gt =
      union_of({pairs[best_pair][0], pairs[best_pair][1]});
  const SaliencyMap all = union_of({0, 1, 2});
  if (spec.cap_gts) {
    scene.gts = {scene.objects[largest], pair_gt, all};
  } else {
    scene.gts = {scene.objects[0], scene.objects[1], scene.objects[2], pair_gt,
                 all};
  }
  return scene;
}

// Degradations --------------------------------------------------------------

namespace {

constexpr std::pair<DegradationKind, std::string_view> kKindNames[] = {
    {DegradationKind::kErode, "erode"},
    {DegradationKind::kDilate, "dilate"},
    {DegradationKind::kHoles, "holes"},
    {DegradationKind::kGrayWash, "gray_wash"},
    {DegradationKind::kDropComponent, "drop_component"},
};

Array morph_step(const Array& in, bool erode) {
  const Eigen::Index h = in.rows(), w = in.cols();
  Array out = in;
  for (Eigen::Index y = 0; y < h; ++y) {
    for (Eigen::Index x = 0; x < w; ++x) {
      double v = in(y, x);
      auto visit = [&](Eigen::Index yy, Eigen::Index xx) {
        const bool inside = yy >= 0 && yy < h && xx >= 0 && xx < w;
        const double n = inside ? in(yy, xx) : 0.0;
        v = erode ? std::min(v, n) : std::max(v, n);
      };
      visit(y - 1, x);
      visit(y + 1, x);
      visit(y, x - 1);
      visit(y, x + 1);
      out(y, x) = v;
    }
  }
  return out;
}

// Fills a (2*half+1)^2 patch around centres drawn from pixels where
// `eligible` holds, re-evaluated against the current state at every step.
template <typename Eligible>
Array stamp_patches(const Array& original, int count, Eigen::Index half,
                    double value, std::uint64_t seed, Eligible eligible) {
  SeededRng rng(seed);
  Array out = original;
  const Eigen::Index h = out.rows(), w = out.cols();
  std::vector<Eigen::Index> candidates;
  for (int step = 0; step < count; ++step) {
    candidates.clear();
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (eligible(original.data()[i], out.data()[i])) candidates.push_back(i);
    }
    if (candidates.empty()) break;
    const Eigen::Index c = candidates[rng.index(candidates.size())];
    const Eigen::Index cy = c / w, cx = c % w;
    for (Eigen::Index y = std::max<Eigen::Index>(0, cy - half);
         y <= std::min(h - 1, cy + half); ++y) {
      for (Eigen::Index x = std::max<Eigen::Index>(0, cx - half);
           x <= std::min(w - 1, cx + half); ++x) {
        out(y, x) = value;
      }
    }
  }
  return out;
}

// Labels 4-connected foreground components; returns per-pixel labels
// (-1 for background) and component sizes in discovery order.
std::vector<std::size_t> label_components(const Array& a,
                                          std::vector<int>& labels) {
  const Eigen::Index h = a.rows(), w = a.cols();
  labels.assign(static_cast<std::size_t>(a.size()), -1);
  std::vector<std::size_t> sizes;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index start = 0; start < a.size(); ++start) {
    if (a.data()[start] <= 0.0 || labels[start] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t size = 0;
    stack.push_back(start);
    labels[start] = id;
    while (!stack.empty()) {
      const Eigen::Index p = stack.back();
      stack.pop_back();
      ++size;
      const Eigen::Index y = p / w, x = p % w;
      const Eigen::Index nbr[4][2] = {{y - 1, x}, {y + 1, x}, {y, x - 1}, {y, x + 1}};
      for (const auto& n : nbr) {
        if (n[0] < 0 || n[0] >= h || n[1] < 0 || n[1] >= w) continue;
        const Eigen::Index q = n[0] * w + n[1];
        if (a.data()[q] > 0.0 && labels[q] < 0) {
          labels[q] = id;
          stack.push_back(q);
        }
      }
    }
    sizes.push_back(size);
  }
  return sizes;
}

}  // namespace

Degradation parse_degradation(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  Degradation d;
  bool known = false;
  for (const auto& [kind, n] : kKindNames) {
    if (n == name) {
      d.kind = kind;
      known = true;
    }
  }
  if (!known) {
    throw ValidationError("unknown degradation '" + std::string(name) + "'");
  }
  if (colon == std::string_view::npos) {
    d.severity = 1;
    return d;
  }
  const std::string sev(text.substr(colon + 1));
  std::size_t used = 0;
  try {
    d.severity = std::stoi(sev, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != sev.size() || sev.empty() || d.severity < 0) {
    throw ValidationError("bad degradation severity in '" + std::string(text) +
                          "'");
  }
  return d;
}

std::vector<Degradation> parse_degradation_list(std::string_view text) {
  std::vector<Degradation> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos
                                           ? std::string_view::npos
                                           : comma - pos);
    if (!item.empty()) out.push_back(parse_degradation(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string to_string(const Degradation& d) {
  for (const auto& [kind, n] : kKindNames) {
    if (kind == d.kind) return std::string(n) + ":" + std::to_string(d.severity);
  }
  return "?";
}

std::vector<Degradation> default_schedule() {
  return {{DegradationKind::kErode, 3},
          {DegradationKind::kHoles, 6},
          {DegradationKind::kGrayWash, 4},
          {DegradationKind::kDilate, 3},
          {DegradationKind::kDropComponent, 1}};
}

SaliencyMap degrade(const SaliencyMap& mask, const Degradation& d,
                    std::uint64_t seed) {
  if (d.severity <= 0) return mask;
  const Array& in = mask.array();
  switch (d.kind) {
    case DegradationKind::kErode:
    case DegradationKind::kDilate: {
      const bool erode = d.kind == DegradationKind::kErode;
      Array a = in;
      for (int i = 0; i < d.severity; ++i) {
        if (erode && !(a > 0.0).any()) break;
        a = morph_step(a, erode);
      }
      return SaliencyMap(a);
    }
    case DegradationKind::kHoles:
      return SaliencyMap(stamp_patches(
          in, d.severity, 1, 0.0, seed,
          [](double orig, double cur) { return orig > 0.5 && cur != 0.0; }));
    case DegradationKind::kGrayWash:
      return SaliencyMap(stamp_patches(
          in, d.severity, 3, 0.5, seed,
          [](double orig, double cur) { return orig > 0.5 && cur != 0.5; }));
    case DegradationKind::kDropComponent: {
      std::vector<int> labels;
      const auto sizes = label_components(in, labels);
      std::vector<int> order(sizes.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return sizes[a] < sizes[b]; });
      std::vector<bool> drop(sizes.size(), false);
      const std::size_t n =
          std::min<std::size_t>(static_cast<std::size_t>(d.severity), sizes.size());
      for (std::size_t i = 0; i < n; ++i) drop[order[i]] = true;
      Array out = in;
      for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (labels[i] >= 0 && drop[labels[i]]) out.data()[i] = 0.0;
      }
      return SaliencyMap(out);
    }
  }
  return mask;
}

std::vector<std::size_t> component_sizes(const SaliencyMap& mask) {
  std::vector<int> labels;
  return label_components(mask.array(), labels);
}

SaliencyMap quantize8(const SaliencyMap& mask) {
  return from_bytes(to_bytes(mask), mask.height(), mask.width());
}

// Benchmarks ----------------------------------------------------------------

void BenchmarkConfig::validate() const {
  if (n_images == 0) throw ValidationError("benchmark needs at least 1 image");
  if (preds_per_image == 0) {
    throw ValidationError("benchmark needs at least 1 prediction per image");
  }
  if (object_counts.empty()) throw ValidationError("no object counts given");
  for (int n : object_counts) {
    if (n != 2 && n != 3) throw ValidationError("object counts must be 2 or 3");
  }
  if (schedule.empty()) throw ValidationError("degradation schedule is empty");
  metric.validate();
}

namespace {

struct GeneratedImage {
  ImageRecord record;
  std::vector<std::size_t> pred_source;  // gt index each prediction came from
  bool has_pair = false;
  MaskPair pair;
  std::size_t pair_gt = 0;
};

GeneratedImage generate_image(const BenchmarkConfig& cfg, std::size_t index) {
  const std::uint64_t image_seed = mix_seed(cfg.seed ^ mix_seed(index + 1));
  SeededRng rng(image_seed);
  GeneratedImage out;

  char id[32];
  std::snprintf(id, sizeof(id), "img_%04zu", index);
  out.record.id = id;

  SceneSpec spec;
  spec.width = cfg.width;
  spec.height = cfg.height;
  spec.n_objects = cfg.object_counts[rng.index(cfg.object_counts.size())];
  spec.seed = mix_seed(image_seed + 1);
  spec.cap_gts = cfg.cap_gts;
  out.record.gts = generate_scene(spec).gts;
  const std::size_t j_count = out.record.gts.size();

  auto pred_seed = [&](std::size_t k) { return mix_seed(image_seed + 101 + k); };
  for (std::size_t k = 0; k < cfg.preds_per_image; ++k) {
    std::size_t src;
    Degradation d;
    if (k < j_count) {
      src = k;
      d = cfg.base;
    } else {
      const std::size_t r = k - j_count;
      src = r % j_count;
      d = cfg.schedule[r % cfg.schedule.size()];
    }
    const SaliencyMap pred =
        quantize8(degrade(out.record.gts[src], d, pred_seed(k)));
    const double score = match_score(pred, out.record.gts[src], cfg.metric);
    out.record.preds.push_back({pred, score});
    out.pred_source.push_back(src);
  }

  // One severity-ordered pair per image: s against s + 2 of the same kind
  // and patch seed, so the worse mask carries the better one's damage plus
  // more. Identical outcomes (saturated degradations) carry no ordering and
  // are skipped.
  constexpr DegradationKind kPairKinds[] = {
      DegradationKind::kErode, DegradationKind::kDilate, DegradationKind::kHoles,
      DegradationKind::kGrayWash, DegradationKind::kDropComponent};
  out.pair_gt = index % j_count;
  const DegradationKind kind = kPairKinds[index % 5];
  const int s = static_cast<int>(rng.uniform_int(1, 3));
  const std::uint64_t patch_seed = mix_seed(image_seed + 7);
  const SaliencyMap& gt = out.record.gts[out.pair_gt];
  const SaliencyMap better = quantize8(degrade(gt, {kind, s}, patch_seed));
  const SaliencyMap worse = quantize8(degrade(gt, {kind, s + 2}, patch_seed));
  if (!(better == worse)) {
    out.has_pair = true;
    out.pair.id = out.record.id;
    out.pair.gt = gt;
    if (rng.index(2) == 0) {
      out.pair.a = better;
      out.pair.b = worse;
      out.pair.label = Superior::kA;
    } else {
      out.pair.a = worse;
      out.pair.b = better;
      out.pair.label = Superior::kB;
    }
  }
  return out;
}

std::vector<GeneratedImage> generate_images(const BenchmarkConfig& cfg) {
  cfg.validate();
  std::vector<GeneratedImage> images(cfg.n_images);
  parallel_for(cfg.n_images, cfg.threads,
               [&](std::size_t i) { images[i] = generate_image(cfg, i); });
  return images;
}

}  // namespace

Benchmark generate_records(const BenchmarkConfig& cfg) {
  auto images = generate_images(cfg);
  Benchmark b;
  for (auto& img : images) {
    b.records.push_back(std::move(img.record));
    if (img.has_pair) b.pairs.push_back(std::move(img.pair));
  }
  return b;
}

BenchmarkFiles generate_benchmark(const BenchmarkConfig& cfg,
                                  const fs::path& out_dir) {
  const auto images = generate_images(cfg);
  std::error_code ec;
  fs::create_directories(out_dir / "masks", ec);
  if (!ec) fs::create_directories(out_dir / "pairs", ec);
  if (ec) {
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  }

  auto gt_path = [](const std::string& id, std::size_t j) {
    return "masks/" + id + "/gt_" + std::to_string(j) + ".png";
  };
  auto pred_path = [](const std::string& id, std::size_t k) {
    return "masks/" + id + "/pred_" + std::to_string(k) + ".png";
  };

  parallel_for(images.size(), cfg.threads, [&](std::size_t i) {
    const GeneratedImage& img = images[i];
    const std::string& id = img.record.id;
    std::error_code dir_ec;
    fs::create_directories(out_dir / "masks" / id, dir_ec);
    if (dir_ec) throw IoError("cannot create directory for " + id);
    for (std::size_t j = 0; j < img.record.gts.size(); ++j) {
      save_mask(img.record.gts[j], out_dir / gt_path(id, j));
    }
    for (std::size_t k = 0; k < img.record.preds.size(); ++k) {
      save_mask(img.record.preds[k].mask, out_dir / pred_path(id, k));
    }
    if (img.has_pair) {
      save_mask(img.pair.a, out_dir / "pairs" / (id + "_a.png"));
      save_mask(img.pair.b, out_dir / "pairs" / (id + "_b.png"));
    }
  });

  Manifest manifest;
  manifest.base = out_dir;
  std::vector<PairsFileEntry> pairs;
  for (const auto& img : images) {
    const std::string& id = img.record.id;
    ManifestEntry e;
    e.id = id;
    for (std::size_t j = 0; j < img.record.gts.size(); ++j) {
      e.gts.push_back(gt_path(id, j));
    }
    for (std::size_t k = 0; k < img.record.preds.size(); ++k) {
      e.preds.push_back({pred_path(id, k), img.record.preds[k].quality_score});
    }
    manifest.images.push_back(std::move(e));
    if (img.has_pair) {
      pairs.push_back({id, "pairs/" + id + "_a.png", "pairs/" + id + "_b.png",
                       gt_path(id, img.pair_gt), img.pair.label});
    }
  }

  BenchmarkFiles files{out_dir / "manifest.json", out_dir / "pairs.json"};
  write_manifest(manifest, files.manifest);
  std::ofstream out(files.pairs, std::ios::binary);
  if (!out) throw IoError("cannot write " + files.pairs.string());
  out << dump_pairs_file(pairs);
  if (!out) throw IoError("write failed: " + files.pairs.string());
  return files;
}

}  // namespace psod
