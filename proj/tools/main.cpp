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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mird/conformal.hpp"
#include "mird/pipeline.hpp"
#include "mird/records.hpp"
#include "mird/report_io.hpp"
#include "mird/stage1.hpp"
#include "mird/synth.hpp"

namespace {

struct DataOptions {
  std::string input = "-";
  bool admit_by_similarity = false;
  double tau = 0.6;
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
  cmd->add_option("-i,--input", opts.input, "Input dataset path, or - for stdin");
  cmd->add_flag("--admit-by-similarity", opts.admit_by_similarity,
                "Recompute admission labels as similarity >= tau");
  cmd->add_option("--tau", opts.tau, "Similarity admission threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

mird::Dataset load_dataset(const DataOptions& opts) {
  mird::ParseStats stats;
  mird::Dataset data = opts.input == "-" ? mird::parse_dataset(std::cin, &stats)
                                         : mird::parse_dataset_file(opts.input, &stats);
  if (stats.unknown_fields > 0)
    std::cerr << "warning: ignored " << stats.unknown_fields << " unknown field(s) in "
              << stats.lines << " line(s)\n";
  if (opts.admit_by_similarity) data = mird::apply_admission_threshold(data, opts.tau);
  return data;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::string opt_cell(const std::optional<std::string>& v) { return v.value_or(""); }

int run_simulate(const mird::SynthParams& params, const std::string& output) {
  write_output(output, mird::serialize_dataset(mird::generate_dataset(params)));
  return 0;
}

int run_bound(const DataOptions& data_opts, const std::vector<int>& budgets,
              double delta, const std::string& output) {
  const auto data = load_dataset(data_opts);
  write_output(output, mird::sweep_to_csv(mird::budget_sweep(data.records, budgets, delta)));
  return 0;
}

int run_calibrate(const DataOptions& data_opts, const std::vector<int>& budgets,
                  const std::vector<double>& alphas, const std::string& output) {
  const auto data = load_dataset(data_opts);
  std::ostringstream out;
  out << "M,alpha,n_full,k_full,lambda_full,n_so,k_so,lambda_so\n";
  bool warned = false;
  for (int m : budgets) {
    for (double alpha : alphas) {
      const auto full = mird::calibrate_full(data.records, m, alpha);
      std::optional<std::string> n_so, k_so, lambda_so;
      try {
        const auto so = mird::calibrate_successful_only(data.records, m, alpha);
        n_so = std::to_string(so.n_scores);
        k_so = std::to_string(so.k_alpha);
        lambda_so = mird::format_threshold(so.threshold);
      } catch (const std::invalid_argument&) {
        if (!warned) {
          std::cerr << "warning: all records sampling-failed at M=" << m
                    << "; successful-only columns left empty\n";
          warned = true;
        }
      }
      out << m << ',' << mird::format_double(alpha) << ',' << full.n_scores << ','
          << full.k_alpha << ',' << mird::format_threshold(full.threshold) << ','
          << opt_cell(n_so) << ',' << opt_cell(k_so) << ',' << opt_cell(lambda_so)
          << '\n';
    }
  }
  write_output(output, out.str());
  return 0;
}

int run_evaluate(const DataOptions& data_opts, const mird::SplitSpec& spec,
                 const std::string& format, const std::string& output) {
  const auto data = load_dataset(data_opts);
  const auto report = mird::monte_carlo(data, spec);
  write_output(output, format == "json" ? mird::report_to_json(report)
                                        : mird::report_to_csv(report));
  return 0;
}

int run_predict(const DataOptions& data_opts, int budget,
                const std::optional<std::string>& lambda_text,
                const std::optional<double>& alpha, const std::string& calibration_path,
                const std::string& format, const std::string& output) {
  mird::Threshold lambda;
  if (lambda_text) {
    lambda = mird::parse_threshold(*lambda_text);
  } else {
    DataOptions cal_opts = data_opts;
    cal_opts.input = calibration_path;
    const auto cal = load_dataset(cal_opts);
    lambda = mird::calibrate_full(cal.records, budget, *alpha).threshold;
  }

  const auto data = load_dataset(data_opts);
  if (budget > data.m_max)
    throw std::invalid_argument("budget " + std::to_string(budget) + " exceeds m_max " +
                                std::to_string(data.m_max));

  if (format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : data.records) {
      const auto set = mird::prediction_set(r, budget, lambda);
      nlohmann::ordered_json j;
      j["id"] = r.id;
      j["members"] = set.member_indices;
      j["dedup_size"] = set.dedup_size;
      if (set.covered) j["covered"] = *set.covered ? 1 : 0;
      rows.push_back(std::move(j));
    }
    nlohmann::ordered_json root;
    root["lambda"] = mird::format_threshold(lambda);
    root["M"] = budget;
    root["rows"] = std::move(rows);
    write_output(output, root.dump(2) + "\n");
    return 0;
  }

  std::ostringstream out;
  out << "id,n_members,dedup_size,covered,members\n";
  for (const auto& r : data.records) {
    const auto set = mird::prediction_set(r, budget, lambda);
    out << r.id << ',' << set.member_indices.size() << ',' << set.dedup_size << ',';
    if (set.covered) out << (*set.covered ? 1 : 0);
    out << ',';
    for (std::size_t i = 0; i < set.member_indices.size(); ++i)
      out << (i ? ";" : "") << set.member_indices[i];
    out << '\n';
  }
  write_output(output, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage miscoverage risk decomposition for sampled candidate sets"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  mird::SynthParams params;
  std::string sim_output = "-";
  simulate->add_option("--questions", params.n_questions, "Number of questions")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--m-max", params.m_max, "Candidates per question")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--difficulty-a", params.difficulty_a, "Difficulty Beta shape a")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--difficulty-b", params.difficulty_b, "Difficulty Beta shape b")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--clusters", params.noise_clusters, "Noise cluster count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", params.seed, "Generator seed")->capture_default_str();
  simulate->add_option("-o,--output", sim_output, "Output path, or - for stdout");

  // bound
  auto* bound = app.add_subcommand("bound", "Stage-I sampling-failure bound sweep");
  DataOptions bound_data;
  std::vector<int> bound_budgets;
  double bound_delta = 0.05;
  std::string bound_output = "-";
  add_data_options(bound, bound_data);
  bound->add_option("--budgets", bound_budgets, "Comma-separated sampling budgets")
      ->required()
      ->delimiter(',');
  bound->add_option("--delta", bound_delta, "Confidence level for the UCB baselines")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bound->add_option("-o,--output", bound_output, "Output path, or - for stdout");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Conformal thresholds per (M, alpha)");
  DataOptions cal_data;
  std::vector<int> cal_budgets;
  std::vector<double> cal_alphas;
  std::string cal_output = "-";
  add_data_options(calibrate, cal_data);
  calibrate->add_option("--budgets", cal_budgets, "Comma-separated sampling budgets")
      ->required()
      ->delimiter(',');
  calibrate->add_option("--alphas", cal_alphas, "Comma-separated risk levels")
      ->required()
      ->delimiter(',');
  calibrate->add_option("-o,--output", cal_output, "Output path, or - for stdout");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Repeated-split Monte Carlo report");
  DataOptions eval_data;
  mird::SplitSpec spec;
  std::string eval_format = "csv";
  std::string eval_output = "-";
  add_data_options(evaluate, eval_data);
  evaluate->add_option("--budgets", spec.budgets, "Comma-separated sampling budgets")
      ->required()
      ->delimiter(',');
  evaluate->add_option("--alphas", spec.alphas, "Comma-separated risk levels")
      ->required()
      ->delimiter(',');
  evaluate->add_option("--splits", spec.n_splits, "Number of random splits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evaluate->add_option("--ratio", spec.ratio, "Calibration fraction")
      ->capture_default_str();
  evaluate->add_option("--seed", spec.base_seed, "Base seed")->capture_default_str();
  evaluate->add_option("--delta", spec.delta, "Confidence level for the UCB baselines")
      ->capture_default_str();
  evaluate->add_option("--workers", spec.workers, "Worker threads (0 = cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  evaluate->add_option("--format", eval_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  evaluate->add_option("-o,--output", eval_output, "Output path, or - for stdout");

  // predict
  auto* predict = app.add_subcommand("predict", "Per-question prediction sets");
  DataOptions pred_data;
  int pred_budget = 0;
  std::optional<std::string> pred_lambda;
  std::optional<double> pred_alpha;
  std::string pred_calibration;
  std::string pred_format = "csv";
  std::string pred_output = "-";
  add_data_options(predict, pred_data);
  predict->add_option("--budget", pred_budget, "Sampling budget M")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* lambda_opt =
      predict->add_option("--lambda", pred_lambda, "Explicit threshold, or inf");
  auto* alpha_opt = predict->add_option("--alpha", pred_alpha, "Risk level");
  auto* cal_opt = predict->add_option("--calibration", pred_calibration,
                                      "Calibration dataset for --alpha");
  lambda_opt->excludes(alpha_opt);
  alpha_opt->needs(cal_opt);
  predict->add_option("--format", pred_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  predict->add_option("-o,--output", pred_output, "Output path, or - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(params, sim_output);
    if (bound->parsed()) return run_bound(bound_data, bound_budgets, bound_delta, bound_output);
    if (calibrate->parsed()) return run_calibrate(cal_data, cal_budgets, cal_alphas, cal_output);
    if (evaluate->parsed()) return run_evaluate(eval_data, spec, eval_format, eval_output);
    if (predict->parsed()) {
      if (!pred_lambda && !pred_alpha)
        throw std::invalid_argument("predict requires exactly one of --lambda or --alpha");
      return run_predict(pred_data, pred_budget, pred_lambda, pred_alpha,
                         pred_calibration, pred_format, pred_output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
