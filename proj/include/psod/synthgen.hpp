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

// Synthetic multi-ground-truth benchmarks.
//
// A scene holds 2 or 3 disjoint shapes; its ground truths are object subsets
// (each object, the union, ...). Predictions are copies of the ground truths
// passed through controlled degradations, and each prediction's quality
// score is its match score against the ground truth it came from. Every
// random draw is derived from the seed, never from thread scheduling.

#ifndef PSOD_SYNTHGEN_HPP
#define PSOD_SYNTHGEN_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "psod/mask_io.hpp"
#include "psod/metrics.hpp"
#include "psod/preference.hpp"

namespace psod {

/// SplitMix64 step; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Deterministic bounded draws on top of mt19937_64 (the standard
/// distributions are implementation-defined).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);
  /// Uniform real in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

enum class Shape { kDisk, kRectangle, kRing };

struct SceneSpec {
  Eigen::Index width = 512;
  Eigen::Index height = 512;
  int n_objects = 2;
  /// Per-object shapes; empty draws them from the seed.
  std::vector<Shape> shapes;
  std::uint64_t seed = 0;
  /// Keep at most three ground truths for three-object scenes.
  bool cap_gts = true;

  void validate() const;
};

struct Scene {
  std::vector<SaliencyMap> gts;
  std::vector<SaliencyMap> objects;
};

/// Two objects: {o1, o2, o1 u o2}. Three objects, capped: {largest object,
/// largest pair, union}; uncapped: {o1, o2, o3, largest pair, union}.
/// Throws ValidationError if the shapes cannot be placed.
Scene generate_scene(const SceneSpec& spec);

enum class DegradationKind { kErode, kDilate, kHoles, kGrayWash, kDropComponent };

struct Degradation {
  DegradationKind kind = DegradationKind::kErode;
  int severity = 0;
};

/// "erode:2" style; severity must be >= 0.
Degradation parse_degradation(std::string_view text);
/// Comma separated list of parse_degradation items.
std::vector<Degradation> parse_degradation_list(std::string_view text);
std::string to_string(const Degradation& d);

/// Applies `d` to a binary mask. Severity 0 is the identity. Severity s:
///  erode / dilate  s passes of 4-neighbour min / max (outside counts as 0)
///  holes           s 3x3 zero patches centred on still-intact foreground
///  gray_wash       s 7x7 patches set to 0.5, centred on unwashed foreground
///  drop_component  remove the s smallest 4-connected components
/// Patch centres are drawn sequentially from `seed`, so severity s + 1 applies
/// the same patches as s plus one more.
SaliencyMap degrade(const SaliencyMap& mask, const Degradation& d,
                    std::uint64_t seed);

/// Foreground components under 4-connectivity, as pixel counts ordered by
/// first raster-order pixel.
std::vector<std::size_t> component_sizes(const SaliencyMap& mask);

/// Rounds a map to the 8-bit grid a PNG round trip would produce.
SaliencyMap quantize8(const SaliencyMap& mask);

std::vector<Degradation> default_schedule();

struct BenchmarkConfig {
  std::size_t n_images = 100;
  Eigen::Index width = 512;
  Eigen::Index height = 512;
  /// Object count per image, drawn uniformly from this list.
  std::vector<int> object_counts = {2, 3};
  std::size_t preds_per_image = 5;
  /// Applied to the one-per-ground-truth "near perfect" predictions.
  Degradation base{DegradationKind::kErode, 0};
  /// Cycled over for the remaining predictions.
  std::vector<Degradation> schedule = default_schedule();
  bool cap_gts = true;
  std::uint64_t seed = 42;
  MetricConfig metric;
  std::size_t threads = 0;

  void validate() const;
};

struct Benchmark {
  std::vector<ImageRecord> records;
  /// Severity-ordered pairs (s vs s + 2) drawn from the same scenes.
  std::vector<MaskPair> pairs;
};

/// In-memory benchmark; masks are already quantised to 8 bits so they equal
/// what generate_benchmark() writes.
Benchmark generate_records(const BenchmarkConfig& cfg);

struct BenchmarkFiles {
  std::filesystem::path manifest;
  std::filesystem::path pairs;
};

/// Writes masks/<id>/{gt_j,pred_k}.png, pairs/<id>_{a,b}.png, manifest.json
/// and pairs.json under `out_dir`.
BenchmarkFiles generate_benchmark(const BenchmarkConfig& cfg,
                                  const std::filesystem::path& out_dir);

}  // namespace psod

#endif  // PSOD_SYNTHGEN_HPP
