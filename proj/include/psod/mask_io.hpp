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

#ifndef PSOD_MASK_IO_HPP
#define PSOD_MASK_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psod/saliency_map.hpp"

namespace psod {

struct Prediction {
  SaliencyMap mask;
  std::optional<double> quality_score;
};

/// One evaluation unit: J >= 1 ground truths and K >= 1 predictions, all of
/// the same shape.
struct ImageRecord {
  std::string id;
  std::vector<SaliencyMap> gts;
  std::vector<Prediction> preds;
};

/// Throws ValidationError / DimensionMismatch if `rec` breaks an invariant.
void validate_record(const ImageRecord& rec);

/// Reads an 8-bit PNG. Gray maps byte g to g / 255; colour images are
/// averaged over their colour channels first. Alpha is ignored.
SaliencyMap load_mask(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG with bytes round(v * 255).
void save_mask(const SaliencyMap& mask, const std::filesystem::path& path);

/// Bytes round(v * 255) in row-major order.
std::vector<unsigned char> to_bytes(const SaliencyMap& mask);
SaliencyMap from_bytes(const std::vector<unsigned char>& bytes,
                       Eigen::Index height, Eigen::Index width);

struct PredictionEntry {
  std::string path;
  std::optional<double> score;
};

struct ManifestEntry {
  std::string id;
  std::vector<std::string> gts;
  std::vector<PredictionEntry> preds;
};

/// Manifest document as written on disk. Paths are kept verbatim; `base`
/// is the directory they resolve against.
struct Manifest {
  std::optional<std::string> root;
  std::vector<ManifestEntry> images;
  std::filesystem::path base;

  std::filesystem::path resolve(const std::string& path) const;
};

/// Parses the manifest JSON text; `manifest_dir` anchors relative paths.
Manifest parse_manifest(const std::string& text,
                        const std::filesystem::path& manifest_dir);

Manifest read_manifest(const std::filesystem::path& path);

/// Serialised form; keys in fixed order, no "root" unless set.
std::string dump_manifest(const Manifest& manifest);

void write_manifest(const Manifest& manifest,
                    const std::filesystem::path& path);

/// Loads every referenced mask and validates each record. Records come back
/// in file order.
std::vector<ImageRecord> load_records(const Manifest& manifest);

struct LoadedManifest {
  Manifest manifest;
  std::vector<ImageRecord> records;
};

LoadedManifest load_manifest(const std::filesystem::path& path);

}  // namespace psod

#endif  // PSOD_MASK_IO_HPP
