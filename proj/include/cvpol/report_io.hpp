// Copyright 2026 The cvpol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Report serialization. All numbers are written with 9 significant digits;
// a criterion whose commutator vanishes is written as an empty value (CSV) or
// null (JSON) plus a zero_bound flag.

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "cvpol/criteria.hpp"
#include "cvpol/scenario.hpp"

namespace cvpol {

/// "%.9g"; empty for NaN.
std::string format_number(double v);

/// One scalar column of a flattened measurement.
struct FlatValue {
  std::string column;
  double value;
};

/// Criterion -> one column named after the measurement; Stokes means ->
/// NAME.S0..S3; ellipse -> NAME.conditional_Sj, NAME.unconditional_Sj and
/// NAME.dashed_bound, normalized to the coherent-state variance.
std::vector<FlatValue> flatten(const ReportEntry& e);
std::vector<std::string> flags(const ReportEntry& e);

std::string report_json(const Report& r);

inline constexpr const char* kReportCsvHeader = "scenario,parameters,measurement,value,sign_choice,gain,flags";
std::string report_csv(const Report& r);

/// Header: PARAM, every flattened column, flags.
std::string sweep_csv(const SweepTable& t);

inline constexpr const char* kFig4CsvHeader = "conditioned_on,observable,conditional,unconditional,dashed_bound";
/// Rows for the three conditioning indices, normalized to a coherent beam.
std::string fig4_csv(const std::array<EllipsePoint, 3>& points);

}  // namespace cvpol
