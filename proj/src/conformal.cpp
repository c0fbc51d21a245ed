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

#include "mird/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "mird/numeric.hpp"
#include "mird/stage1.hpp"
#include "mird/uncertainty.hpp"

namespace mird {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
}

ConformalCalibration make_calibration(std::vector<double> scores, double alpha,
                                      CalibrationMethod method) {
  check_alpha(alpha);
  if (scores.empty()) throw std::invalid_argument("no calibration scores");
  for (double s : scores)
    if (!std::isfinite(s)) throw std::invalid_argument("calibration scores must be finite");

  std::stable_sort(scores.begin(), scores.end());
  ConformalCalibration c;
  c.method = method;
  c.alpha = alpha;
  c.n_scores = scores.size();
  c.k_alpha = conformal_rank(scores.size(), alpha);
  c.threshold = c.k_alpha <= c.n_scores ? Threshold::finite(scores[c.k_alpha - 1])
                                        : Threshold::infinite();
  c.sorted_scores = std::move(scores);
  return c;
}

std::vector<double> gt_scores(const std::vector<QuestionRecord>& records, int budget,
                              bool successful_only) {
  std::vector<double> scores;
  scores.reserve(records.size());
  for (const auto& r : records) {
    if (successful_only && failure_indicator(r, budget)) continue;
    scores.push_back(ground_truth_score(r, budget));
  }
  return scores;
}

}  // namespace

bool threshold_less(const Threshold& a, const Threshold& b) {
  if (!a.is_finite) return false;
  if (!b.is_finite) return true;
  return a.value < b.value;
}

std::size_t conformal_rank(std::size_t n_scores, double alpha) {
  check_alpha(alpha);
  const double x = static_cast<double>(n_scores + 1) * (1.0 - alpha);
  const auto k = static_cast<std::size_t>(guarded_ceil(x));
  return std::max<std::size_t>(1, std::min(k, n_scores + 1));
}

ConformalCalibration conformal_threshold(std::vector<double> scores, double alpha) {
  return make_calibration(std::move(scores), alpha, CalibrationMethod::full);
}

ConformalCalibration calibrate_full(const std::vector<QuestionRecord>& cal_records,
                                    int budget, double alpha) {
  if (cal_records.empty()) throw std::invalid_argument("no calibration records");
  return make_calibration(gt_scores(cal_records, budget, false), alpha,
                          CalibrationMethod::full);
}

ConformalCalibration calibrate_successful_only(
    const std::vector<QuestionRecord>& cal_records, int budget, double alpha) {
  if (cal_records.empty()) throw std::invalid_argument("no calibration records");
  auto scores = gt_scores(cal_records, budget, true);
  if (scores.empty())
    throw std::invalid_argument(
        "all calibration records sampling-failed; successful-only calibration undefined");
  return make_calibration(std::move(scores), alpha, CalibrationMethod::successful_only);
}

PredictionSet prediction_set(const QuestionRecord& r, int budget, const Threshold& lambda) {
  const auto scores = cluster_frequency_uncertainty(r, budget);
  PredictionSet set;
  std::unordered_set<int> clusters;
  bool any_admissible = false;
  bool any_unlabeled = false;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!lambda.admits(scores[j])) continue;
    set.member_indices.push_back(static_cast<int>(j + 1));
    clusters.insert(r.candidates[j].cluster_id);
    const auto& a = r.candidates[j].admission;
    if (!a)
      any_unlabeled = true;
    else if (*a)
      any_admissible = true;
  }
  set.dedup_size = static_cast<int>(clusters.size());
  if (any_admissible)
    set.covered = true;
  else if (!any_unlabeled)
    set.covered = false;  // includes the empty set
  return set;
}

PredictionSet prediction_set(const QuestionRecord& r, int budget,
                             const ConformalCalibration& calibration) {
  return prediction_set(r, budget, calibration.threshold);
}

CoverageFraction exhaustive_coverage_oracle(const std::vector<double>& scores,
                                            double alpha) {
  check_alpha(alpha);
  if (scores.size() < 2) throw std::invalid_argument("need at least two scores");
  if (scores.size() > 8)
    throw std::invalid_argument("exhaustive oracle limited to 8 scores");
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("exhaustive oracle requires distinct scores");

  CoverageFraction f;
  f.total = scores.size();
  std::vector<double> rest;
  rest.reserve(scores.size() - 1);
  for (std::size_t held = 0; held < scores.size(); ++held) {
    rest.clear();
    for (std::size_t j = 0; j < scores.size(); ++j)
      if (j != held) rest.push_back(scores[j]);
    const auto calib = conformal_threshold(rest, alpha);
    if (calib.threshold.admits(scores[held])) ++f.covered;
  }
  return f;
}

}  // namespace mird
