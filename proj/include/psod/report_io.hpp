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

// Text serialisation of evaluation results. CSV uses four decimals, JSON
// keeps full double precision.

#ifndef PSOD_REPORT_IO_HPP
#define PSOD_REPORT_IO_HPP

#include <span>
#include <string>

#include "psod/pluralistic.hpp"

namespace psod {

std::string format_fixed4(double v);

/// `tau,ap,ar,f1` header plus one row.
std::string eval_report_csv(const EvalReport& report);

/// {"threshold", "ap", "ar", "f1", "n_images", "images": [...]}.
std::string eval_report_json(const EvalReport& report);

/// `tau,ap,ar,f1` header, one row per point, then a row whose first cell is
/// `best:<tau>` carrying the best-F1 point.
std::string curve_csv(std::span<const CurvePoint> curve, const CurvePoint& best);

/// {"curve": [...], "best": {...}}.
std::string curve_json(std::span<const CurvePoint> curve,
                       const CurvePoint& best);

}  // namespace psod

#endif  // PSOD_REPORT_IO_HPP
