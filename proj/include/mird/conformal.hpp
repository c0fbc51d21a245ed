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
#include <optional>
#include <vector>

#include "mird/records.hpp"

namespace mird {

/// Extended selection threshold: a finite score bound, or the +infinity
/// convention used when the quantile rank exceeds the calibration size.
/// Represented as a tagged value (never a large float) so comparisons
/// against the sentinel are total.
struct Threshold {
  bool is_finite = true;
  double value = 0.0;

  static Threshold finite(double v) { return {true, v}; }
  static Threshold infinite() { return {false, 0.0}; }

  /// Membership test of the filtered prediction set: score <= threshold.
  bool admits(double score) const { return !is_finite || score <= value; }

  friend bool operator==(const Threshold&, const Threshold&) = default;
};

/// Total order with the infinite sentinel greatest.
bool threshold_less(const Threshold& a, const Threshold& b);

enum class CalibrationMethod { full, successful_only };

struct ConformalCalibration {
  CalibrationMethod method = CalibrationMethod::full;
  double alpha = 0.0;
  std::size_t n_scores = 0;
  std::size_t k_alpha = 0;  // 1-based rank ceil((n_scores+1)(1-alpha))
  Threshold threshold;
  std::vector<double> sorted_scores;  // non-decreasing, retained for audit
};

/// Filtered prediction set of one record at one budget. Indices are 1-based
/// positions in the budget prefix. `covered` is engaged when the members'
/// admission labels determine it (any admissible member, or all members
/// labeled inadmissible); an empty set is never covered.
struct PredictionSet {
  std::vector<int> member_indices;
  int dedup_size = 0;  // distinct cluster ids among members
  std::optional<bool> covered;
};

/// k_alpha = ceil((n_scores + 1)(1 - alpha)), with products within 1e-9 of
/// an integer treated as that integer before the ceiling.
std::size_t conformal_rank(std::size_t n_scores, double alpha);

/// Sorts the scores (stable, non-decreasing) and takes the k_alpha-th order
/// statistic, or the infinite sentinel when k_alpha = n_scores + 1.
ConformalCalibration conformal_threshold(std::vector<double> scores, double alpha);

/// Full calibration: ground-truth scores of ALL records, including
/// sampling-failed ones (no calibration data is discarded).
ConformalCalibration calibrate_full(const std::vector<QuestionRecord>& cal_records,
                                    int budget, double alpha);

/// Successful-only baseline: ground-truth scores of records whose budget
/// prefix contains an admissible candidate. Throws when every record is
/// sampling-failed (the baseline is undefined, not defaulted).
ConformalCalibration calibrate_successful_only(
    const std::vector<QuestionRecord>& cal_records, int budget, double alpha);

PredictionSet prediction_set(const QuestionRecord& r, int budget, const Threshold& lambda);
PredictionSet prediction_set(const QuestionRecord& r, int budget,
                             const ConformalCalibration& calibration);

/// Exact leave-one-out coverage as a rational count / (N+1).
struct CoverageFraction {
  std::size_t covered = 0;
  std::size_t total = 0;
};

/// For each of the N+1 choices of held-out score, calibrates on the other N
/// and records whether the held-out score is admitted. Requires at most 8
/// distinct scores (ties rejected); the result equals k_alpha/(N+1) exactly.
CoverageFraction exhaustive_coverage_oracle(const std::vector<double>& scores,
                                            double alpha);

}  // namespace mird
