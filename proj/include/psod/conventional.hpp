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

#ifndef PSOD_CONVENTIONAL_HPP
#define PSOD_CONVENTIONAL_HPP

#include <span>
#include <string>
#include <vector>

#include "psod/mask_io.hpp"
#include "psod/metrics.hpp"
#include "psod/pluralistic.hpp"

namespace psod {

struct ConventionalRow {
  std::string id;
  double f_max = 0;
  double f_avg = 0;
  double s_measure = 0;
  double mae = 0;
};

struct ConventionalTable {
  std::vector<ConventionalRow> rows;
  ConventionalRow mean;  // id "MEAN"
};

/// Single-mask benchmark: first prediction of each record against its first
/// ground truth (binarised at 0.5 for F and S; MAE uses soft values).
ConventionalTable conventional_eval(std::span<const ImageRecord> records,
                                    const MetricConfig& cfg,
                                    const EvalOptions& opts = {});

/// `id,f_max,f_avg,s_measure,mae`, one row per record and a final MEAN row,
/// four decimals.
std::string conventional_csv(const ConventionalTable& table);

}  // namespace psod

#endif  // PSOD_CONVENTIONAL_HPP
