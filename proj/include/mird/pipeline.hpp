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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mird/conformal.hpp"
#include "mird/records.hpp"
#include "mird/stage1.hpp"

namespace mird {

/// Repeated-split Monte Carlo protocol parameters. The per-split seed is
/// base_seed XOR split_index; shuffling is keyed on records sorted by id,
/// so results are independent of input file ordering.
struct SplitSpec {
  std::size_t n_splits = 500;
  double ratio = 0.5;  // calibration fraction, size ceil(ratio * n)
  std::uint64_t base_seed = 0;
  std::vector<int> budgets;
  std::vector<double> alphas;
  double delta = 0.05;
  int workers = 0;  // 0 = hardware concurrency; results are worker-invariant
};

/// One (budget, alpha) cell of a single calibration/test split.
struct CellOutcome {
  int budget = 0;
  double alpha = 0.0;
  StageOneBounds stage1;
  Threshold lambda_full;
  std::optional<Threshold> lambda_so;  // absent when all calibration failed
  std::size_t n_test = 0;
  std::size_t n_failed_test = 0;    // test records with Z = 1
  std::size_t n_miscovered = 0;     // overall miscoverage count
  std::size_t n_z0_miscovered = 0;  // miscovered among Z = 0 test records
  double sampling_risk = 0.0;
  std::optional<double> cond_sel_risk;  // absent when no Z = 0 test record
  double overall_risk = 0.0;
  std::optional<double> size_easy;  // mean dedup size, top-1 admissible
  std::optional<double> size_hard;  // mean dedup size, top-1 inadmissible
};

/// One aggregated report row per (budget, alpha).
struct ReportRow {
  int budget = 0;
  double alpha = 0.0;
  double sampling_risk = 0.0;
  double mird_proxy_mean = 0.0;
  double ucb_clp_mean = 0.0;
  double ucb_hfd_mean = 0.0;
  std::optional<double> cond_sel_risk;  // macro mean over effective splits
  double overall_risk = 0.0;
  double bound_loose = 0.0;  // alpha + mird_proxy_mean
  double bound_tight = 0.0;  // alpha + (1 - alpha) * mird_proxy_mean
  Threshold lambda_full_mean;            // infinite if any split was infinite
  std::optional<Threshold> lambda_so_mean;
  std::optional<double> size_easy;
  std::optional<double> size_hard;
  std::optional<double> gap;  // size_hard - size_easy
  std::size_t n_effective_splits = 0;
  std::optional<double> sampling_risk_se;
  std::optional<double> mird_proxy_se;
  std::optional<double> cond_sel_risk_se;
  std::optional<double> overall_risk_se;
};

struct PipelineReport {
  std::vector<ReportRow> rows;  // budget-major, then alpha
};

double overall_bound_loose(double alpha, double proxy);
double overall_bound_tight(double alpha, double proxy);

/// One end-to-end two-stage evaluation: Stage-I bounds on the calibration
/// records, both calibrations, and the full-calibration threshold applied
/// to the test records.
CellOutcome two_stage_run(const std::vector<QuestionRecord>& cal_records,
                          const std::vector<QuestionRecord>& test_records,
                          int budget, double alpha, double delta);

/// Mean deduplicated set sizes over Z = 0 test records, stratified by
/// whether the top-1 (lowest-uncertainty, ties to lowest index) candidate
/// is admissible. An empty stratum yields absent fields and an absent gap.
struct StratumSizes {
  std::optional<double> size_easy;
  std::optional<double> size_hard;
  std::optional<double> gap;
};
StratumSizes stratify_difficulty(const std::vector<QuestionRecord>& test_records,
                                 int budget, const ConformalCalibration& calibration);

struct MonteCarloResult {
  PipelineReport report;
  /// splits[s] holds the cells of split s, budget-major then alpha.
  std::vector<std::vector<CellOutcome>> splits;
};

/// Repeated-split driver. Splits may run on concurrent workers; aggregation
/// is ordered by split index with pairwise summation, so reports are a pure
/// function of (dataset, spec) regardless of worker count.
MonteCarloResult run_monte_carlo(const Dataset& dataset, const SplitSpec& spec);
PipelineReport monte_carlo(const Dataset& dataset, const SplitSpec& spec);

}  // namespace mird
