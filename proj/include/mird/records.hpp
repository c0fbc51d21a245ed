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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mird {

/// One sampled answer: its semantic cluster label within the question, an
/// admission label against the ground truth, and optional precomputed
/// similarity / uncertainty scalars in [0,1].
///
/// The admission label may be absent on the wire (e.g. raw similarity data
/// awaiting thresholding); every statistic that consumes admissions throws
/// if a needed label is missing.
struct Candidate {
  int cluster_id = 0;
  std::optional<bool> admission;
  std::optional<double> similarity;
  std::optional<double> uncertainty;
};

/// One prompt's candidate list in generation order, so that the first M
/// candidates realize the budget-M candidate set and prefixes nest across
/// budgets. gt_cluster / gt_uncertainty anchor the ground-truth answer.
struct QuestionRecord {
  std::string id;
  std::vector<Candidate> candidates;
  std::optional<int> gt_cluster;
  std::optional<double> gt_uncertainty;
};

struct Dataset {
  std::vector<QuestionRecord> records;
  int m_max = 0;  // minimum candidate count across records
};

struct ParseStats {
  std::size_t lines = 0;
  std::size_t unknown_fields = 0;  // ignored keys, counted for a warning
};

/// Validates records (distinct ids, non-empty candidate lists, field ranges)
/// and computes m_max. Throws std::invalid_argument on violation.
Dataset make_dataset(std::vector<QuestionRecord> records);

/// Parses line-delimited JSON, one QuestionRecord per line. Errors report
/// the 1-based line number and the offending field. Unknown fields are
/// ignored and counted in `stats`.
Dataset parse_dataset(std::istream& in, ParseStats* stats = nullptr);
Dataset parse_dataset_text(const std::string& text, ParseStats* stats = nullptr);
Dataset parse_dataset_file(const std::string& path, ParseStats* stats = nullptr);

/// Canonical line-delimited serialization. parse is a left inverse:
/// re-serializing a parsed canonical stream reproduces it byte-for-byte.
void serialize_dataset(const Dataset& d, std::ostream& out);
std::string serialize_dataset(const Dataset& d);

/// Overwrites every admission label with similarity >= tau. All other
/// fields are unchanged. Throws if any candidate lacks a similarity.
Dataset apply_admission_threshold(const Dataset& d, double tau);

/// The record restricted to its first `budget` candidates. Throws if the
/// budget exceeds the candidate count; budgets are never clamped.
QuestionRecord prefix(const QuestionRecord& r, int budget);

/// Throws std::invalid_argument unless 1 <= budget <= candidate count.
void check_budget(const QuestionRecord& r, int budget);

}  // namespace mird
