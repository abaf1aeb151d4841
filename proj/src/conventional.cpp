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

#include "psod/conventional.hpp"

#include "psod/error.hpp"
#include "psod/parallel.hpp"
#include "psod/report_io.hpp"

namespace psod {

ConventionalTable conventional_eval(std::span<const ImageRecord> records,
                                    const MetricConfig& cfg,
                                    const EvalOptions& opts) {
  if (records.empty()) throw ValidationError("no records to evaluate");
  cfg.validate();
  ConventionalTable table;
  table.rows.resize(records.size());
  parallel_for(records.size(), opts.threads, [&](std::size_t i) {
    const ImageRecord& rec = records[i];
    validate_record(rec);
    const SaliencyMap& pred = rec.preds.front().mask;
    const SaliencyMap& gt = rec.gts.front();
    const SaliencyMap gt_bin = binarize(gt, 0.5);
    const FCurve curve = f_curve(pred, gt_bin, cfg);
    ConventionalRow& row = table.rows[i];
    row.id = rec.id;
    row.f_max = f_max(curve);
    row.f_avg = f_mean(curve);
    row.s_measure = s_measure(pred, gt_bin, cfg);
    row.mae = mae(pred, gt);
  });
  table.mean.id = "MEAN";
  for (const auto& r : table.rows) {
    table.mean.f_max += r.f_max;
    table.mean.f_avg += r.f_avg;
    table.mean.s_measure += r.s_measure;
    table.mean.mae += r.mae;
  }
  const double n = static_cast<double>(table.rows.size());
  table.mean.f_max /= n;
  table.mean.f_avg /= n;
  table.mean.s_measure /= n;
  table.mean.mae /= n;
  return table;
}

std::string conventional_csv(const ConventionalTable& table) {
  std::string out = "id,f_max,f_avg,s_measure,mae\n";
  auto row = [&](const ConventionalRow& r) {
    out += r.id + "," + format_fixed4(r.f_max) + "," + format_fixed4(r.f_avg) +
           "," + format_fixed4(r.s_measure) + "," + format_fixed4(r.mae) + "\n";
  };
  for (const auto& r : table.rows) row(r);
  row(table.mean);
  return out;
}

}  // namespace psod
