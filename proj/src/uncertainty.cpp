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

#include "mird/uncertainty.hpp"

#include <stdexcept>
#include <unordered_map>

namespace mird {

namespace {

bool is_admitted(const QuestionRecord& r, std::size_t index) {
  const auto& a = r.candidates[index].admission;
  if (!a)
    throw std::invalid_argument("record " + r.id + ": candidate " +
                                std::to_string(index + 1) + " has no admission label");
  return *a;
}

}  // namespace

std::vector<double> cluster_frequency_uncertainty(const QuestionRecord& r, int budget) {
  check_budget(r, budget);
  const auto m = static_cast<std::size_t>(budget);

  std::size_t precomputed = 0;
  for (std::size_t j = 0; j < m; ++j)
    if (r.candidates[j].uncertainty) ++precomputed;
  if (precomputed == m) {
    std::vector<double> scores(m);
    for (std::size_t j = 0; j < m; ++j) scores[j] = *r.candidates[j].uncertainty;
    return scores;
  }
  if (precomputed != 0)
    throw std::invalid_argument("record " + r.id +
                                ": precomputed uncertainty present on only " +
                                std::to_string(precomputed) + " of the first " +
                                std::to_string(m) + " candidates");

  std::unordered_map<int, int> counts;
  for (std::size_t j = 0; j < m; ++j) ++counts[r.candidates[j].cluster_id];
  std::vector<double> scores(m);
  for (std::size_t j = 0; j < m; ++j)
    scores[j] = 1.0 - static_cast<double>(counts[r.candidates[j].cluster_id]) /
                          static_cast<double>(budget);
  return scores;
}

double ground_truth_score(const QuestionRecord& r, int budget) {
  check_budget(r, budget);
  if (r.gt_uncertainty) return *r.gt_uncertainty;
  const auto m = static_cast<std::size_t>(budget);
  if (r.gt_cluster) {
    int count = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (r.candidates[j].cluster_id == *r.gt_cluster) ++count;
    return 1.0 - static_cast<double>(count) / static_cast<double>(budget);
  }
  int admitted = 0;
  for (std::size_t j = 0; j < m; ++j)
    if (is_admitted(r, j)) ++admitted;
  return 1.0 - static_cast<double>(admitted) / static_cast<double>(budget);
}

std::optional<double> reference_score(const QuestionRecord& r, int budget) {
  const auto scores = cluster_frequency_uncertainty(r, budget);
  std::optional<double> best;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!is_admitted(r, j)) continue;
    if (!best || scores[j] < *best) best = scores[j];
  }
  return best;
}

ScoredRecord score_record(const QuestionRecord& r, int budget) {
  ScoredRecord s;
  s.budget = budget;
  s.candidate_scores = cluster_frequency_uncertainty(r, budget);
  s.gt_score = ground_truth_score(r, budget);
  std::optional<double> best;
  for (std::size_t j = 0; j < s.candidate_scores.size(); ++j) {
    if (!is_admitted(r, j)) continue;
    if (!best || s.candidate_scores[j] < *best) best = s.candidate_scores[j];
  }
  s.reference_score = best;
  return s;
}

}  // namespace mird
