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

#include "mird/records.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace mird {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

double unit_interval_field(const nlohmann::json& v, std::size_t line,
                           const std::string& field) {
  if (!v.is_number()) fail(line, field + " must be a number");
  const double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0))
    fail(line, field + " must lie in [0,1] (got " + v.dump() + ")");
  return x;
}

int non_negative_int_field(const nlohmann::json& v, std::size_t line,
                           const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(line, field + " must be a non-negative integer (got " + v.dump() + ")");
  return static_cast<int>(v.get<long long>());
}

Candidate parse_candidate(const nlohmann::json& j, std::size_t line,
                          std::size_t index, ParseStats& stats) {
  if (!j.is_object()) fail(line, "candidate " + std::to_string(index) + " is not an object");
  const std::string where = "candidate " + std::to_string(index) + ": ";
  Candidate c;
  bool have_cluster = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "cluster_id") {
      c.cluster_id = non_negative_int_field(value, line, where + "cluster_id");
      have_cluster = true;
    } else if (key == "admission") {
      if (!value.is_number_integer() ||
          (value.get<long long>() != 0 && value.get<long long>() != 1))
        fail(line, where + "admission must be 0 or 1 (got " + value.dump() + ")");
      c.admission = value.get<long long>() == 1;
    } else if (key == "similarity") {
      c.similarity = unit_interval_field(value, line, where + "similarity");
    } else if (key == "uncertainty") {
      c.uncertainty = unit_interval_field(value, line, where + "uncertainty");
    } else {
      ++stats.unknown_fields;
    }
  }
  if (!have_cluster) fail(line, where + "missing cluster_id");
  return c;
}

QuestionRecord parse_record(const std::string& text, std::size_t line,
                            ParseStats& stats) {
  const auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) fail(line, "malformed record");
  if (!j.is_object()) fail(line, "record is not an object");

  QuestionRecord r;
  bool have_id = false;
  bool have_candidates = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "id") {
      if (!value.is_string()) fail(line, "id must be a string");
      r.id = value.get<std::string>();
      have_id = true;
    } else if (key == "gt_cluster") {
      r.gt_cluster = non_negative_int_field(value, line, "gt_cluster");
    } else if (key == "gt_uncertainty") {
      r.gt_uncertainty = unit_interval_field(value, line, "gt_uncertainty");
    } else if (key == "candidates") {
      if (!value.is_array()) fail(line, "candidates must be an array");
      std::size_t index = 1;
      for (const auto& cj : value) r.candidates.push_back(parse_candidate(cj, line, index++, stats));
      have_candidates = true;
    } else {
      ++stats.unknown_fields;
    }
  }
  if (!have_id) fail(line, "missing id");
  if (!have_candidates || r.candidates.empty()) fail(line, "empty candidate list");
  return r;
}

ordered_json candidate_to_json(const Candidate& c) {
  ordered_json j;
  j["cluster_id"] = c.cluster_id;
  if (c.admission) j["admission"] = *c.admission ? 1 : 0;
  if (c.similarity) j["similarity"] = *c.similarity;
  if (c.uncertainty) j["uncertainty"] = *c.uncertainty;
  return j;
}

void check_unit_interval(const std::optional<double>& v, const std::string& what) {
  if (v && !(*v >= 0.0 && *v <= 1.0))
    throw std::invalid_argument(what + " must lie in [0,1]");
}

}  // namespace

Dataset make_dataset(std::vector<QuestionRecord> records) {
  if (records.empty()) throw std::invalid_argument("dataset contains no records");
  std::unordered_set<std::string> ids;
  ids.reserve(records.size());
  std::size_t m_max = std::numeric_limits<std::size_t>::max();
  for (const auto& r : records) {
    if (r.candidates.empty())
      throw std::invalid_argument("record " + r.id + ": empty candidate list");
    if (!ids.insert(r.id).second)
      throw std::invalid_argument("duplicate record id: " + r.id);
    if (r.gt_cluster && *r.gt_cluster < 0)
      throw std::invalid_argument("record " + r.id + ": gt_cluster must be non-negative");
    check_unit_interval(r.gt_uncertainty, "record " + r.id + ": gt_uncertainty");
    for (const auto& c : r.candidates) {
      if (c.cluster_id < 0)
        throw std::invalid_argument("record " + r.id + ": cluster_id must be non-negative");
      check_unit_interval(c.similarity, "record " + r.id + ": similarity");
      check_unit_interval(c.uncertainty, "record " + r.id + ": uncertainty");
    }
    m_max = std::min(m_max, r.candidates.size());
  }
  return Dataset{std::move(records), static_cast<int>(m_max)};
}

Dataset parse_dataset(std::istream& in, ParseStats* stats) {
  ParseStats local;
  std::vector<QuestionRecord> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ++local.lines;
    auto r = parse_record(line, line_no, local);
    if (!ids.insert(r.id).second) fail(line_no, "duplicate id: " + r.id);
    records.push_back(std::move(r));
  }
  if (stats) *stats = local;
  return make_dataset(std::move(records));
}

Dataset parse_dataset_text(const std::string& text, ParseStats* stats) {
  std::istringstream in(text);
  return parse_dataset(in, stats);
}

Dataset parse_dataset_file(const std::string& path, ParseStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return parse_dataset(in, stats);
}

void serialize_dataset(const Dataset& d, std::ostream& out) {
  for (const auto& r : d.records) {
    ordered_json j;
    j["id"] = r.id;
    if (r.gt_cluster) j["gt_cluster"] = *r.gt_cluster;
    if (r.gt_uncertainty) j["gt_uncertainty"] = *r.gt_uncertainty;
    auto& cands = j["candidates"] = ordered_json::array();
    for (const auto& c : r.candidates) cands.push_back(candidate_to_json(c));
    out << j.dump() << '\n';
  }
}

std::string serialize_dataset(const Dataset& d) {
  std::ostringstream out;
  serialize_dataset(d, out);
  return out.str();
}

Dataset apply_admission_threshold(const Dataset& d, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("tau must lie in [0,1]");
  Dataset result = d;
  for (auto& r : result.records) {
    for (auto& c : r.candidates) {
      if (!c.similarity)
        throw std::invalid_argument("record " + r.id +
                                    ": candidate without similarity; cannot threshold");
      c.admission = *c.similarity >= tau;
    }
  }
  return result;
}

void check_budget(const QuestionRecord& r, int budget) {
  if (budget < 1)
    throw std::invalid_argument("budget must be positive (got " + std::to_string(budget) + ")");
  if (static_cast<std::size_t>(budget) > r.candidates.size())
    throw std::invalid_argument("record " + r.id + ": budget " + std::to_string(budget) +
                                " exceeds " + std::to_string(r.candidates.size()) +
                                " candidates");
}

QuestionRecord prefix(const QuestionRecord& r, int budget) {
  check_budget(r, budget);
  QuestionRecord out;
  out.id = r.id;
  out.candidates.assign(r.candidates.begin(), r.candidates.begin() + budget);
  out.gt_cluster = r.gt_cluster;
  out.gt_uncertainty = r.gt_uncertainty;
  return out;
}

}  // namespace mird
