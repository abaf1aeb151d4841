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

#include "psod/preference.hpp"

#include <cmath>
#include <optional>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psod/error.hpp"
#include "psod/mask_io.hpp"

namespace psod {
namespace fs = std::filesystem;

TiePolicy parse_tie_policy(std::string_view name) {
  if (name == "half") return TiePolicy::kHalf;
  if (name == "wrong") return TiePolicy::kWrong;
  throw ValidationError("unknown tie policy '" + std::string(name) +
                        "' (expected half or wrong)");
}

double alignment_accuracy(std::span<const PreferencePair> pairs,
                          TiePolicy tie_policy) {
  if (pairs.empty()) throw ValidationError("no preference pairs");
  double hits = 0;
  for (const auto& p : pairs) {
    if (!std::isfinite(p.score_a) || !std::isfinite(p.score_b)) {
      throw ValidationError("pair '" + p.id + "' has a non-finite score");
    }
    if (p.score_a == p.score_b) {
      if (tie_policy == TiePolicy::kHalf) hits += 0.5;
      continue;
    }
    const bool a_higher = p.score_a > p.score_b;
    if (a_higher == (p.label == Superior::kA)) hits += 1;
  }
  return hits / static_cast<double>(pairs.size());
}

namespace {

constexpr std::pair<MetricKind, std::string_view> kMetricNames[] = {
    {MetricKind::kMae, "mae"},         {MetricKind::kFMax, "f_max"},
    {MetricKind::kFAvg, "f_avg"},      {MetricKind::kEMean, "e_mean"},
    {MetricKind::kSMeasure, "s_measure"}, {MetricKind::kMatch, "match"},
};

}  // namespace

MetricKind parse_metric_kind(std::string_view name) {
  for (const auto& [kind, n] : kMetricNames) {
    if (n == name) return kind;
  }
  throw ValidationError("unknown metric '" + std::string(name) + "'");
}

std::string_view metric_name(MetricKind kind) {
  for (const auto& [k, n] : kMetricNames) {
    if (k == kind) return n;
  }
  return "?";
}

double metric_quality(const SaliencyMap& candidate, const SaliencyMap& gt,
                      MetricKind kind, const MetricConfig& cfg) {
  switch (kind) {
    case MetricKind::kMae:
      return -mae(candidate, gt);
    case MetricKind::kFMax:
      return f_max(f_curve(candidate, binarize(gt, 0.5), cfg));
    case MetricKind::kFAvg:
      return f_mean(f_curve(candidate, binarize(gt, 0.5), cfg));
    case MetricKind::kEMean:
      return e_measure_mean(candidate, binarize(gt, 0.5), cfg);
    case MetricKind::kSMeasure:
      return s_measure(candidate, binarize(gt, 0.5), cfg);
    case MetricKind::kMatch:
      return match_score(candidate, gt, cfg);
  }
  throw ValidationError("unknown metric kind");
}

std::vector<PreferencePair> score_pairs_with_metric(
    std::span<const MaskPair> pairs, MetricKind kind, const MetricConfig& cfg) {
  std::vector<PreferencePair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.push_back({p.id, metric_quality(p.a, p.gt, kind, cfg),
                   metric_quality(p.b, p.gt, kind, cfg), p.label});
  }
  return out;
}

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::variant<double, std::string> side(const json& e, const char* key,
                                       const std::string& where) {
  if (!e.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
  const json& v = e.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  throw ValidationError(where + ": '" + key + "' must be a number or a path");
}

}  // namespace

std::vector<PairsFileEntry> parse_pairs_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed pairs file: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("pairs file must be an array");
  std::vector<PairsFileEntry> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& e = doc[i];
    const std::string where = "pairs[" + std::to_string(i) + "]";
    if (!e.is_object()) throw ValidationError(where + " must be an object");
    PairsFileEntry p;
    if (e.contains("id") && e["id"].is_string()) {
      p.id = e["id"].get<std::string>();
    } else {
      p.id = std::to_string(i);
    }
    p.a = side(e, "a", where);
    p.b = side(e, "b", where);
    if (e.contains("gt")) {
      if (!e["gt"].is_string()) throw ValidationError(where + ": 'gt' not a path");
      p.gt = e["gt"].get<std::string>();
    }
    if (!e.contains("label") || !e["label"].is_string()) {
      throw ValidationError(where + ": missing 'label'");
    }
    const std::string label = e["label"].get<std::string>();
    if (label == "A") {
      p.label = Superior::kA;
    } else if (label == "B") {
      p.label = Superior::kB;
    } else {
      throw ValidationError(where + ": label must be \"A\" or \"B\"");
    }
    const bool needs_gt = std::holds_alternative<std::string>(p.a) ||
                          std::holds_alternative<std::string>(p.b);
    if (needs_gt && p.gt.empty()) {
      throw ValidationError(where + ": mask paths need a 'gt' path");
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) throw ValidationError("pairs file is empty");
  return out;
}

std::string dump_pairs_file(std::span<const PairsFileEntry> entries) {
  ordered_json doc = ordered_json::array();
  auto put = [](ordered_json& j, const char* key,
                const std::variant<double, std::string>& v) {
    if (std::holds_alternative<double>(v)) {
      j[key] = std::get<double>(v);
    } else {
      j[key] = std::get<std::string>(v);
    }
  };
  for (const auto& e : entries) {
    ordered_json j;
    j["id"] = e.id;
    put(j, "a", e.a);
    put(j, "b", e.b);
    if (!e.gt.empty()) j["gt"] = e.gt;
    j["label"] = e.label == Superior::kA ? "A" : "B";
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::vector<PreferencePair> load_preference_pairs(const fs::path& path,
                                                  MetricKind kind,
                                                  const MetricConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open pairs file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto entries = parse_pairs_file(ss.str());
  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  std::vector<PreferencePair> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    PreferencePair p{e.id, 0, 0, e.label};
    std::optional<SaliencyMap> gt;
    auto score = [&](const std::variant<double, std::string>& v) {
      if (std::holds_alternative<double>(v)) return std::get<double>(v);
      if (!gt) gt = load_mask(resolve(e.gt));
      return metric_quality(load_mask(resolve(std::get<std::string>(v))), *gt,
                            kind, cfg);
    };
    p.score_a = score(e.a);
    p.score_b = score(e.b);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace psod
