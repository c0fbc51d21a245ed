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

#include "mird/report_io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mird {

namespace {

constexpr const char* kReportHeader =
    "M,alpha,sampling_risk,mird_bound,ucb_clp,ucb_hfd,cond_sel_risk,overall_risk,"
    "bound_loose,bound_tight,lambda_full,lambda_so,size_easy,size_hard,gap,"
    "n_effective_splits,sampling_risk_se,mird_bound_se,cond_sel_risk_se,"
    "overall_risk_se";

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::optional<Threshold> parse_opt_threshold(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_threshold(s);
}

// JSON numbers are pinned to the printed 12-significant-digit precision so
// the two report forms stay equivalent.
nlohmann::ordered_json rounded(double v) {
  return std::stod(format_double(v));
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  const auto result =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  return std::string(buf, result.ptr);
}

std::string format_threshold(const Threshold& t) {
  return t.is_finite ? format_double(t.value) : std::string("inf");
}

Threshold parse_threshold(const std::string& s) {
  if (s == "inf") return Threshold::infinite();
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return Threshold::finite(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid threshold value: " + s);
  }
}

std::string report_to_csv(const PipelineReport& report) {
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.budget << ',' << format_double(r.alpha) << ','
        << format_double(r.sampling_risk) << ',' << format_double(r.mird_proxy_mean)
        << ',' << format_double(r.ucb_clp_mean) << ',' << format_double(r.ucb_hfd_mean)
        << ',' << opt_field(r.cond_sel_risk) << ',' << format_double(r.overall_risk)
        << ',' << format_double(r.bound_loose) << ',' << format_double(r.bound_tight)
        << ',' << format_threshold(r.lambda_full_mean) << ','
        << (r.lambda_so_mean ? format_threshold(*r.lambda_so_mean) : std::string{})
        << ',' << opt_field(r.size_easy) << ',' << opt_field(r.size_hard) << ','
        << opt_field(r.gap) << ',' << r.n_effective_splits << ','
        << opt_field(r.sampling_risk_se) << ',' << opt_field(r.mird_proxy_se) << ','
        << opt_field(r.cond_sel_risk_se) << ',' << opt_field(r.overall_risk_se)
        << '\n';
  }
  return out.str();
}

PipelineReport report_from_csv(const std::string& csv) {
  const auto cells = parse_csv_cells(csv);
  if (cells.empty()) throw std::runtime_error("empty report");
  {
    std::ostringstream joined;
    for (std::size_t i = 0; i < cells.front().size(); ++i)
      joined << (i ? "," : "") << cells.front()[i];
    if (joined.str() != kReportHeader)
      throw std::runtime_error("unexpected report header: " + joined.str());
  }
  PipelineReport report;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const auto& row = cells[i];
    if (row.size() != 20)
      throw std::runtime_error("report row " + std::to_string(i) + " has " +
                               std::to_string(row.size()) + " fields, expected 20");
    ReportRow r;
    r.budget = std::stoi(row[0]);
    r.alpha = std::stod(row[1]);
    r.sampling_risk = std::stod(row[2]);
    r.mird_proxy_mean = std::stod(row[3]);
    r.ucb_clp_mean = std::stod(row[4]);
    r.ucb_hfd_mean = std::stod(row[5]);
    r.cond_sel_risk = parse_opt(row[6]);
    r.overall_risk = std::stod(row[7]);
    r.bound_loose = std::stod(row[8]);
    r.bound_tight = std::stod(row[9]);
    r.lambda_full_mean = parse_threshold(row[10]);
    r.lambda_so_mean = parse_opt_threshold(row[11]);
    r.size_easy = parse_opt(row[12]);
    r.size_hard = parse_opt(row[13]);
    r.gap = parse_opt(row[14]);
    r.n_effective_splits = static_cast<std::size_t>(std::stoull(row[15]));
    r.sampling_risk_se = parse_opt(row[16]);
    r.mird_proxy_se = parse_opt(row[17]);
    r.cond_sel_risk_se = parse_opt(row[18]);
    r.overall_risk_se = parse_opt(row[19]);
    report.rows.push_back(std::move(r));
  }
  return report;
}

std::string report_to_json(const PipelineReport& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json j;
    j["M"] = r.budget;
    j["alpha"] = rounded(r.alpha);
    j["sampling_risk"] = rounded(r.sampling_risk);
    j["mird_bound"] = rounded(r.mird_proxy_mean);
    j["ucb_clp"] = rounded(r.ucb_clp_mean);
    j["ucb_hfd"] = rounded(r.ucb_hfd_mean);
    if (r.cond_sel_risk) j["cond_sel_risk"] = rounded(*r.cond_sel_risk);
    j["overall_risk"] = rounded(r.overall_risk);
    j["bound_loose"] = rounded(r.bound_loose);
    j["bound_tight"] = rounded(r.bound_tight);
    if (r.lambda_full_mean.is_finite)
      j["lambda_full"] = rounded(r.lambda_full_mean.value);
    else
      j["lambda_full"] = "inf";
    if (r.lambda_so_mean) {
      if (r.lambda_so_mean->is_finite)
        j["lambda_so"] = rounded(r.lambda_so_mean->value);
      else
        j["lambda_so"] = "inf";
    }
    if (r.size_easy) j["size_easy"] = rounded(*r.size_easy);
    if (r.size_hard) j["size_hard"] = rounded(*r.size_hard);
    if (r.gap) j["gap"] = rounded(*r.gap);
    j["n_effective_splits"] = r.n_effective_splits;
    if (r.sampling_risk_se) j["sampling_risk_se"] = rounded(*r.sampling_risk_se);
    if (r.mird_proxy_se) j["mird_bound_se"] = rounded(*r.mird_proxy_se);
    if (r.cond_sel_risk_se) j["cond_sel_risk_se"] = rounded(*r.cond_sel_risk_se);
    if (r.overall_risk_se) j["overall_risk_se"] = rounded(*r.overall_risk_se);
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<StageOneBounds>& sweep) {
  std::ostringstream out;
  out << "M,n_cal,failures,emp_rate,mird_bound,ucb_clp,ucb_hfd,delta\n";
  for (const auto& b : sweep) {
    out << b.budget << ',' << b.n_cal << ',' << b.failures << ','
        << format_double(b.emp_rate) << ',' << format_double(b.mird_proxy) << ','
        << format_double(b.ucb_clp) << ',' << format_double(b.ucb_hfd) << ','
        << format_double(b.delta) << '\n';
  }
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv_cells(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mird
