// Copyright 2026 The mird Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "mird/pipeline.hpp"
#include "mird/stage1.hpp"

namespace mird {

/// Shortest representation at 12 significant digits, locale-independent.
std::string format_double(double x);

/// A threshold field: the finite value, or the literal token "inf".
std::string format_threshold(const Threshold& t);
Threshold parse_threshold(const std::string& s);

/// CSV form of the Monte Carlo report. Absent values are empty fields.
/// Header:
///   M,alpha,sampling_risk,mird_bound,ucb_clp,ucb_hfd,cond_sel_risk,
///   overall_risk,bound_loose,bound_tight,lambda_full,lambda_so,size_easy,
///   size_hard,gap,n_effective_splits,sampling_risk_se,mird_bound_se,
///   cond_sel_risk_se,overall_risk_se
std::string report_to_csv(const PipelineReport& report);

/// Inverse of report_to_csv on emitted tables (values at printed precision).
PipelineReport report_from_csv(const std::string& csv);

/// Equivalent structured-text object form ({"rows": [...]}); numeric values
/// carry the same 12-significant-digit precision, absent fields are omitted
/// and infinite thresholds appear as the string "inf".
std::string report_to_json(const PipelineReport& report);

/// Stage-I sweep table: M,n_cal,failures,emp_rate,mird_bound,ucb_clp,ucb_hfd,delta.
std::string sweep_to_csv(const std::vector<StageOneBounds>& sweep);

/// Minimal CSV cell splitter for the unquoted numeric tables above.
std::vector<std::vector<std::string>> parse_csv_cells(const std::string& csv);

}  // namespace mird
