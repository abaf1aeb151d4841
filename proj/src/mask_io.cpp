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

#include "psod/mask_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "psod/error.hpp"

namespace psod {
namespace fs = std::filesystem;

void validate_record(const ImageRecord& rec) {
  if (rec.gts.empty()) {
    throw ValidationError("record '" + rec.id + "' has no ground truth");
  }
  if (rec.preds.empty()) {
    throw ValidationError("record '" + rec.id + "' has no predictions");
  }
  const SaliencyMap& ref = rec.gts.front();
  for (const auto& gt : rec.gts) {
    if (!gt.same_shape(ref)) {
      throw DimensionMismatch("record '" + rec.id +
                              "': ground truths differ in size");
    }
  }
  for (const auto& p : rec.preds) {
    if (!p.mask.same_shape(ref)) {
      throw DimensionMismatch("record '" + rec.id +
                              "': prediction and ground truth differ in size");
    }
    if (p.quality_score && !(*p.quality_score >= 0 && *p.quality_score <= 1)) {
      throw ValidationError("record '" + rec.id +
                            "': quality score outside [0,1]");
    }
  }
}

std::vector<unsigned char> to_bytes(const SaliencyMap& mask) {
  std::vector<unsigned char> out(static_cast<std::size_t>(mask.size()));
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    out[i] = static_cast<unsigned char>(std::lround(mask[i] * 255.0));
  }
  return out;
}

SaliencyMap from_bytes(const std::vector<unsigned char>& bytes,
                       Eigen::Index height, Eigen::Index width) {
  if (height < 1 || width < 1 ||
      static_cast<Eigen::Index>(bytes.size()) != height * width) {
    throw ValidationError("byte buffer does not match the mask shape");
  }
  MaskArray<double> a(static_cast<Eigen::Index>(height),
                      static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = static_cast<double>(bytes[i]) / 255.0;
  }
  return SaliencyMap(a);
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

}  // namespace

SaliencyMap load_mask(const fs::path& path) {
  std::unique_ptr<std::FILE, FileCloser> file(
      std::fopen(path.string().c_str(), "rb"));
  if (!file) throw IoError("cannot open mask file: " + path.string());

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError("not a PNG file: " + path.string());
  }

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialisation failed");
  }

  // libpng reports errors by longjmp; objects with destructors live outside
  // the jump region.
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  volatile png_uint_32 width = 0, height = 0;
  volatile int channels = 0;
  volatile bool bad_depth = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (depth == 16) {
    bad_depth = true;
  } else {
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);
    channels = png_get_channels(png, info);
    const png_size_t stride = png_get_rowbytes(png, info);
    pixels.resize(stride * height);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) rows[r] = &pixels[r * stride];
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (bad_depth) {
    throw IoError("unsupported bit depth 16 in " + path.string());
  }
  if (width == 0 || height == 0) {
    throw IoError("zero-sized image: " + path.string());
  }
  if (channels != 1 && channels != 3) {
    throw IoError("unsupported channel layout in " + path.string());
  }

  MaskArray<double> a(static_cast<Eigen::Index>(height),
                      static_cast<Eigen::Index>(width));
  const std::size_t n = static_cast<std::size_t>(width) * height;
  for (std::size_t i = 0; i < n; ++i) {
    if (channels == 1) {
      a.data()[i] = pixels[i] / 255.0;
    } else {
      const unsigned sum = pixels[3 * i] + pixels[3 * i + 1] + pixels[3 * i + 2];
      a.data()[i] = sum / (3.0 * 255.0);
    }
  }
  return SaliencyMap(a);
}

void save_mask(const SaliencyMap& mask, const fs::path& path) {
  const auto bytes = to_bytes(mask);
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(mask.width());
  image.height = static_cast<png_uint_32>(mask.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(),
                               0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot write " + path.string() + ": " + msg);
  }
}

// Manifest ------------------------------------------------------------------

fs::path Manifest::resolve(const std::string& path) const {
  const fs::path p(path);
  if (p.is_absolute()) return p;
  fs::path anchor = base;
  if (root) {
    const fs::path r(*root);
    anchor = r.is_absolute() ? r : base / r;
  }
  return (anchor / p).lexically_normal();
}

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw ValidationError(where + ": missing string field '" + key + "'");
  }
  return obj.at(key).get<std::string>();
}

}  // namespace

Manifest parse_manifest(const std::string& text, const fs::path& manifest_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("manifest must be an object");

  Manifest m;
  m.base = manifest_dir;
  if (doc.contains("root")) {
    if (!doc["root"].is_string()) {
      throw ValidationError("manifest 'root' must be a string");
    }
    m.root = doc["root"].get<std::string>();
  }
  if (!doc.contains("images") || !doc["images"].is_array()) {
    throw ValidationError("manifest needs an 'images' array");
  }
  if (doc["images"].empty()) throw ValidationError("manifest has no images");

  std::set<std::string> seen;
  for (std::size_t i = 0; i < doc["images"].size(); ++i) {
    const json& img = doc["images"][i];
    const std::string where = "images[" + std::to_string(i) + "]";
    if (!img.is_object()) throw ValidationError(where + " must be an object");
    ManifestEntry e;
    e.id = require_string(img, "id", where);
    if (!seen.insert(e.id).second) {
      throw ValidationError("duplicate image id '" + e.id + "'");
    }
    if (!img.contains("gts") || !img["gts"].is_array() || img["gts"].empty()) {
      throw ValidationError(where + ": 'gts' must be a non-empty array");
    }
    for (const auto& g : img["gts"]) {
      if (!g.is_string()) throw ValidationError(where + ": gt path not a string");
      e.gts.push_back(g.get<std::string>());
    }
    if (!img.contains("preds") || !img["preds"].is_array() ||
        img["preds"].empty()) {
      throw ValidationError(where + ": 'preds' must be a non-empty array");
    }
    for (const auto& p : img["preds"]) {
      if (!p.is_object()) throw ValidationError(where + ": pred must be an object");
      PredictionEntry pe;
      pe.path = require_string(p, "path", where);
      if (p.contains("score") && !p["score"].is_null()) {
        if (!p["score"].is_number()) {
          throw ValidationError(where + ": score must be a number");
        }
        const double s = p["score"].get<double>();
        if (!(s >= 0 && s <= 1)) {
          throw ValidationError(where + ": score outside [0,1]");
        }
        pe.score = s;
      }
      e.preds.push_back(std::move(pe));
    }
    m.images.push_back(std::move(e));
  }
  return m;
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path());
}

std::string dump_manifest(const Manifest& manifest) {
  ordered_json doc = ordered_json::object();
  if (manifest.root) doc["root"] = *manifest.root;
  ordered_json images = ordered_json::array();
  for (const auto& e : manifest.images) {
    ordered_json img;
    img["id"] = e.id;
    img["gts"] = e.gts;
    ordered_json preds = ordered_json::array();
    for (const auto& p : e.preds) {
      ordered_json pj;
      pj["path"] = p.path;
      if (p.score) pj["score"] = *p.score;
      preds.push_back(std::move(pj));
    }
    img["preds"] = std::move(preds);
    images.push_back(std::move(img));
  }
  doc["images"] = std::move(images);
  return doc.dump(2) + "\n";
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  out << dump_manifest(manifest);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ImageRecord> load_records(const Manifest& manifest) {
  if (manifest.images.empty()) throw ValidationError("manifest has no images");
  std::vector<ImageRecord> records;
  records.reserve(manifest.images.size());
  auto load = [&](const std::string& p) {
    const fs::path full = manifest.resolve(p);
    if (!fs::exists(full)) {
      throw IoError("manifest references missing file: " + full.string());
    }
    return load_mask(full);
  };
  for (const auto& e : manifest.images) {
    ImageRecord rec;
    rec.id = e.id;
    for (const auto& g : e.gts) rec.gts.push_back(load(g));
    for (const auto& p : e.preds) rec.preds.push_back({load(p.path), p.score});
    validate_record(rec);
    records.push_back(std::move(rec));
  }
  return records;
}

LoadedManifest load_manifest(const fs::path& path) {
  LoadedManifest out;
  out.manifest = read_manifest(path);
  out.records = load_records(out.manifest);
  return out;
}

}  // namespace psod
