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

#include "psod/report_io.hpp"

#include <cstdio>

#include <json.hpp>

namespace psod {

using ordered_json = nlohmann::ordered_json;

std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string eval_report_csv(const EvalReport& report) {
  return "tau,ap,ar,f1\n" + format_fixed4(report.threshold) + "," +
         format_fixed4(report.ap) + "," + format_fixed4(report.ar) + "," +
         format_fixed4(report.f1) + "\n";
}

std::string eval_report_json(const EvalReport& report) {
  ordered_json doc;
  doc["threshold"] = report.threshold;
  doc["ap"] = report.ap;
  doc["ar"] = report.ar;
  doc["f1"] = report.f1;
  doc["n_images"] = report.per_image.size();
  ordered_json images = ordered_json::array();
  for (const auto& s : report.per_image) {
    ordered_json img;
    img["id"] = s.id;
    img["precision"] = s.precision;
    img["recall"] = s.recall;
    img["kept"] = s.kept_pred_indices;
    img["fallback"] = s.fallback;
    images.push_back(std::move(img));
  }
  doc["images"] = std::move(images);
  return doc.dump(2) + "\n";
}

namespace {

std::string point_row(const std::string& label, const CurvePoint& p) {
  return label + "," + format_fixed4(p.ap) + "," + format_fixed4(p.ar) + "," +
         format_fixed4(p.f1) + "\n";
}

ordered_json point_json(const CurvePoint& p) {
  ordered_json j;
  j["tau"] = p.tau;
  j["ap"] = p.ap;
  j["ar"] = p.ar;
  j["f1"] = p.f1;
  return j;
}

}  // namespace

std::string curve_csv(std::span<const CurvePoint> curve,
                      const CurvePoint& best) {
  std::string out = "tau,ap,ar,f1\n";
  for (const auto& p : curve) out += point_row(format_fixed4(p.tau), p);
  out += point_row("best:" + format_fixed4(best.tau), best);
  return out;
}

std::string curve_json(std::span<const CurvePoint> curve,
                       const CurvePoint& best) {
  ordered_json doc;
  ordered_json pts = ordered_json::array();
  for (const auto& p : curve) pts.push_back(point_json(p));
  doc["curve"] = std::move(pts);
  doc["best"] = point_json(best);
  return doc.dump(2) + "\n";
}

}  // namespace psod
