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

// Agreement between a scoring function and human better/worse labels on
// mask pairs.

#ifndef PSOD_PREFERENCE_HPP
#define PSOD_PREFERENCE_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "psod/metrics.hpp"
#include "psod/saliency_map.hpp"

namespace psod {

enum class Superior { kA, kB };

struct PreferencePair {
  std::string id;
  double score_a = 0;
  double score_b = 0;
  Superior label = Superior::kA;
};

/// How exact score ties count: half a hit, or a miss.
enum class TiePolicy { kHalf, kWrong };

TiePolicy parse_tie_policy(std::string_view name);

double alignment_accuracy(std::span<const PreferencePair> pairs,
                          TiePolicy tie_policy = TiePolicy::kHalf);

/// Classical metrics usable as mask quality scores. Oriented so that higher
/// is better; MAE is negated.
enum class MetricKind { kMae, kFMax, kFAvg, kEMean, kSMeasure, kMatch };

MetricKind parse_metric_kind(std::string_view name);
std::string_view metric_name(MetricKind kind);

double metric_quality(const SaliencyMap& candidate, const SaliencyMap& gt,
                      MetricKind kind, const MetricConfig& cfg);

struct MaskPair {
  std::string id;
  SaliencyMap a;
  SaliencyMap b;
  SaliencyMap gt;
  Superior label = Superior::kA;
};

std::vector<PreferencePair> score_pairs_with_metric(
    std::span<const MaskPair> pairs, MetricKind kind, const MetricConfig& cfg);

/// One element of a pairs file. `a` / `b` are either scores or mask paths;
/// paths need `gt`.
struct PairsFileEntry {
  std::string id;
  std::variant<double, std::string> a;
  std::variant<double, std::string> b;
  std::string gt;  // empty when absent
  Superior label = Superior::kA;
};

std::vector<PairsFileEntry> parse_pairs_file(const std::string& text);
std::string dump_pairs_file(std::span<const PairsFileEntry> entries);

/// Reads a pairs file and turns each entry into scores: numbers are used
/// as-is, mask paths (relative to the file) are scored with `kind`.
std::vector<PreferencePair> load_preference_pairs(
    const std::filesystem::path& path, MetricKind kind,
    const MetricConfig& cfg);

}  // namespace psod

#endif  // PSOD_PREFERENCE_HPP
