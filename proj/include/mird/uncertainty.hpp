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

#include <optional>
#include <vector>

#include "mird/records.hpp"

namespace mird {

/// Scores of one record at a fixed budget: per-candidate uncertainties, the
/// ground-truth-anchored calibration score, and the test-side reference
/// score (the minimum uncertainty over admissible candidates, absent when
/// the budget prefix contains no admissible candidate).
struct ScoredRecord {
  int budget = 0;
  std::vector<double> candidate_scores;
  double gt_score = 0.0;
  std::optional<double> reference_score;
};

/// Uncertainty of candidate j = 1 - (its cluster's frequency among the
/// first `budget` candidates). When all of the first `budget` candidates
/// carry a precomputed `uncertainty`, those take precedence; a mix of
/// present and absent values is an error.
std::vector<double> cluster_frequency_uncertainty(const QuestionRecord& r, int budget);

/// Calibration-side nonconformity of the ground truth. Resolution order:
/// gt_uncertainty passthrough, then 1 - freq(gt_cluster), then
/// 1 - (admissible count)/budget. Sampling-failed records score exactly 1
/// under the last fallback.
double ground_truth_score(const QuestionRecord& r, int budget);

/// Minimum candidate uncertainty over admissible candidates in the budget
/// prefix; absent when there is none. Ties resolve to the lowest index
/// (value-irrelevant).
std::optional<double> reference_score(const QuestionRecord& r, int budget);

ScoredRecord score_record(const QuestionRecord& r, int budget);

}  // namespace mird
