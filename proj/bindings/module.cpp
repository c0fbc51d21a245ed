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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mird/conformal.hpp"
#include "mird/pipeline.hpp"
#include "mird/records.hpp"
#include "mird/report_io.hpp"
#include "mird/stage1.hpp"
#include "mird/synth.hpp"
#include "mird/uncertainty.hpp"

namespace py = pybind11;
using namespace mird;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-stage miscoverage risk decomposition for sampled candidate sets";

  // records
  py::class_<Candidate>(m, "Candidate")
      .def(py::init<>())
      .def(py::init([](int cluster_id, std::optional<bool> admission,
                       std::optional<double> similarity,
                       std::optional<double> uncertainty) {
             return Candidate{cluster_id, admission, similarity, uncertainty};
           }),
           py::arg("cluster_id"), py::arg("admission") = std::nullopt,
           py::arg("similarity") = std::nullopt, py::arg("uncertainty") = std::nullopt)
      .def_readwrite("cluster_id", &Candidate::cluster_id)
      .def_readwrite("admission", &Candidate::admission)
      .def_readwrite("similarity", &Candidate::similarity)
      .def_readwrite("uncertainty", &Candidate::uncertainty)
      .def("__repr__", [](const Candidate& c) {
        std::ostringstream out;
        out << "Candidate(cluster_id=" << c.cluster_id;
        if (c.admission) out << ", admission=" << (*c.admission ? "True" : "False");
        if (c.similarity) out << ", similarity=" << *c.similarity;
        if (c.uncertainty) out << ", uncertainty=" << *c.uncertainty;
        out << ")";
        return out.str();
      });

  py::class_<QuestionRecord>(m, "QuestionRecord")
      .def(py::init<>())
      .def(py::init([](std::string id, std::vector<Candidate> candidates,
                       std::optional<int> gt_cluster,
                       std::optional<double> gt_uncertainty) {
             return QuestionRecord{std::move(id), std::move(candidates), gt_cluster,
                                   gt_uncertainty};
           }),
           py::arg("id"), py::arg("candidates"), py::arg("gt_cluster") = std::nullopt,
           py::arg("gt_uncertainty") = std::nullopt)
      .def_readwrite("id", &QuestionRecord::id)
      .def_readwrite("candidates", &QuestionRecord::candidates)
      .def_readwrite("gt_cluster", &QuestionRecord::gt_cluster)
      .def_readwrite("gt_uncertainty", &QuestionRecord::gt_uncertainty);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("records", &Dataset::records)
      .def_readonly("m_max", &Dataset::m_max)
      .def("__len__", [](const Dataset& d) { return d.records.size(); });

  m.def("make_dataset", &make_dataset, py::arg("records"),
        "Validate records and compute m_max");
  m.def(
      "parse_dataset",
      [](const std::string& text) { return parse_dataset_text(text); },
      py::arg("text"), "Parse line-delimited JSON records");
  m.def(
      "parse_dataset_file",
      [](const std::string& path) { return parse_dataset_file(path); },
      py::arg("path"));
  m.def("serialize_dataset",
        py::overload_cast<const Dataset&>(&serialize_dataset), py::arg("dataset"));
  m.def("apply_admission_threshold", &apply_admission_threshold, py::arg("dataset"),
        py::arg("tau"), "Relabel admissions as similarity >= tau");
  m.def("prefix", &prefix, py::arg("record"), py::arg("budget"),
        "First `budget` candidates of a record");

  // uncertainty
  py::class_<ScoredRecord>(m, "ScoredRecord")
      .def_readonly("budget", &ScoredRecord::budget)
      .def_readonly("candidate_scores", &ScoredRecord::candidate_scores)
      .def_readonly("gt_score", &ScoredRecord::gt_score)
      .def_readonly("reference_score", &ScoredRecord::reference_score);

  m.def("cluster_frequency_uncertainty", &cluster_frequency_uncertainty,
        py::arg("record"), py::arg("budget"),
        "Per-candidate uncertainty: one minus the cluster frequency");
  m.def("ground_truth_score", &ground_truth_score, py::arg("record"), py::arg("budget"));
  m.def("reference_score", &reference_score, py::arg("record"), py::arg("budget"));
  m.def("score_record", &score_record, py::arg("record"), py::arg("budget"));

  // stage 1
  py::class_<StageOneBounds>(m, "StageOneBounds")
      .def_readonly("budget", &StageOneBounds::budget)
      .def_readonly("n_cal", &StageOneBounds::n_cal)
      .def_readonly("failures", &StageOneBounds::failures)
      .def_readonly("emp_rate", &StageOneBounds::emp_rate)
      .def_readonly("mird_proxy", &StageOneBounds::mird_proxy)
      .def_readonly("ucb_clp", &StageOneBounds::ucb_clp)
      .def_readonly("ucb_hfd", &StageOneBounds::ucb_hfd)
      .def_readonly("delta", &StageOneBounds::delta);

  m.def("failure_indicator", &failure_indicator, py::arg("record"), py::arg("budget"));
  m.def("empirical_failure_rate", &empirical_failure_rate, py::arg("records"),
        py::arg("budget"));
  m.def("mird_bound", &mird_bound, py::arg("emp_rate"), py::arg("n_cal"),
        "(N * emp_rate + 1) / (N + 1)");
  m.def("clopper_pearson_ucb", &clopper_pearson_ucb, py::arg("k"), py::arg("n"),
        py::arg("delta"), "Exact one-sided binomial upper confidence bound");
  m.def("hoeffding_ucb", &hoeffding_ucb, py::arg("emp_rate"), py::arg("n"),
        py::arg("delta"));
  m.def("stage_one_bounds", &stage_one_bounds, py::arg("records"), py::arg("budget"),
        py::arg("delta") = 0.05);
  m.def("budget_sweep", &budget_sweep, py::arg("records"), py::arg("budgets"),
        py::arg("delta") = 0.05);

  // conformal
  py::class_<Threshold>(m, "Threshold")
      .def_static("finite", &Threshold::finite, py::arg("value"))
      .def_static("infinite", &Threshold::infinite)
      .def_readonly("is_finite", &Threshold::is_finite)
      .def_readonly("value", &Threshold::value)
      .def("admits", &Threshold::admits, py::arg("score"))
      .def("__eq__",
           [](const Threshold& a, const Threshold& b) { return a == b; })
      .def("__repr__", [](const Threshold& t) {
        return "Threshold(" + format_threshold(t) + ")";
      });

  py::enum_<CalibrationMethod>(m, "CalibrationMethod")
      .value("full", CalibrationMethod::full)
      .value("successful_only", CalibrationMethod::successful_only);

  py::class_<ConformalCalibration>(m, "ConformalCalibration")
      .def_readonly("method", &ConformalCalibration::method)
      .def_readonly("alpha", &ConformalCalibration::alpha)
      .def_readonly("n_scores", &ConformalCalibration::n_scores)
      .def_readonly("k_alpha", &ConformalCalibration::k_alpha)
      .def_readonly("threshold", &ConformalCalibration::threshold)
      .def_readonly("sorted_scores", &ConformalCalibration::sorted_scores);

  py::class_<PredictionSet>(m, "PredictionSet")
      .def_readonly("member_indices", &PredictionSet::member_indices)
      .def_readonly("dedup_size", &PredictionSet::dedup_size)
      .def_readonly("covered", &PredictionSet::covered);

  py::class_<CoverageFraction>(m, "CoverageFraction")
      .def_readonly("covered", &CoverageFraction::covered)
      .def_readonly("total", &CoverageFraction::total);

  m.def("conformal_rank", &conformal_rank, py::arg("n_scores"), py::arg("alpha"));
  m.def("conformal_threshold", &conformal_threshold, py::arg("scores"), py::arg("alpha"));
  m.def("calibrate_full", &calibrate_full, py::arg("cal_records"), py::arg("budget"),
        py::arg("alpha"));
  m.def("calibrate_successful_only", &calibrate_successful_only, py::arg("cal_records"),
        py::arg("budget"), py::arg("alpha"));
  m.def("prediction_set",
        py::overload_cast<const QuestionRecord&, int, const Threshold&>(&prediction_set),
        py::arg("record"), py::arg("budget"), py::arg("threshold"));
  m.def("prediction_set",
        py::overload_cast<const QuestionRecord&, int, const ConformalCalibration&>(
            &prediction_set),
        py::arg("record"), py::arg("budget"), py::arg("calibration"));
  m.def("exhaustive_coverage_oracle", &exhaustive_coverage_oracle, py::arg("scores"),
        py::arg("alpha"));

  // pipeline
  py::class_<SplitSpec>(m, "SplitSpec")
      .def(py::init([](std::size_t n_splits, double ratio, std::uint64_t base_seed,
                       std::vector<int> budgets, std::vector<double> alphas,
                       double delta, int workers) {
             return SplitSpec{n_splits, ratio, base_seed, std::move(budgets),
                              std::move(alphas), delta, workers};
           }),
           py::arg("n_splits") = 500, py::arg("ratio") = 0.5, py::arg("base_seed") = 0,
           py::arg("budgets") = std::vector<int>{}, py::arg("alphas") = std::vector<double>{},
           py::arg("delta") = 0.05, py::arg("workers") = 0)
      .def_readwrite("n_splits", &SplitSpec::n_splits)
      .def_readwrite("ratio", &SplitSpec::ratio)
      .def_readwrite("base_seed", &SplitSpec::base_seed)
      .def_readwrite("budgets", &SplitSpec::budgets)
      .def_readwrite("alphas", &SplitSpec::alphas)
      .def_readwrite("delta", &SplitSpec::delta)
      .def_readwrite("workers", &SplitSpec::workers);

  py::class_<CellOutcome>(m, "CellOutcome")
      .def_readonly("budget", &CellOutcome::budget)
      .def_readonly("alpha", &CellOutcome::alpha)
      .def_readonly("stage1", &CellOutcome::stage1)
      .def_readonly("lambda_full", &CellOutcome::lambda_full)
      .def_readonly("lambda_so", &CellOutcome::lambda_so)
      .def_readonly("n_test", &CellOutcome::n_test)
      .def_readonly("n_failed_test", &CellOutcome::n_failed_test)
      .def_readonly("n_miscovered", &CellOutcome::n_miscovered)
      .def_readonly("n_z0_miscovered", &CellOutcome::n_z0_miscovered)
      .def_readonly("sampling_risk", &CellOutcome::sampling_risk)
      .def_readonly("cond_sel_risk", &CellOutcome::cond_sel_risk)
      .def_readonly("overall_risk", &CellOutcome::overall_risk)
      .def_readonly("size_easy", &CellOutcome::size_easy)
      .def_readonly("size_hard", &CellOutcome::size_hard);

  py::class_<ReportRow>(m, "ReportRow")
      .def_readonly("budget", &ReportRow::budget)
      .def_readonly("alpha", &ReportRow::alpha)
      .def_readonly("sampling_risk", &ReportRow::sampling_risk)
      .def_readonly("mird_proxy_mean", &ReportRow::mird_proxy_mean)
      .def_readonly("ucb_clp_mean", &ReportRow::ucb_clp_mean)
      .def_readonly("ucb_hfd_mean", &ReportRow::ucb_hfd_mean)
      .def_readonly("cond_sel_risk", &ReportRow::cond_sel_risk)
      .def_readonly("overall_risk", &ReportRow::overall_risk)
      .def_readonly("bound_loose", &ReportRow::bound_loose)
      .def_readonly("bound_tight", &ReportRow::bound_tight)
      .def_readonly("lambda_full_mean", &ReportRow::lambda_full_mean)
      .def_readonly("lambda_so_mean", &ReportRow::lambda_so_mean)
      .def_readonly("size_easy", &ReportRow::size_easy)
      .def_readonly("size_hard", &ReportRow::size_hard)
      .def_readonly("gap", &ReportRow::gap)
      .def_readonly("n_effective_splits", &ReportRow::n_effective_splits)
      .def_readonly("sampling_risk_se", &ReportRow::sampling_risk_se)
      .def_readonly("mird_proxy_se", &ReportRow::mird_proxy_se)
      .def_readonly("cond_sel_risk_se", &ReportRow::cond_sel_risk_se)
      .def_readonly("overall_risk_se", &ReportRow::overall_risk_se);

  py::class_<PipelineReport>(m, "PipelineReport")
      .def_readonly("rows", &PipelineReport::rows);

  py::class_<StratumSizes>(m, "StratumSizes")
      .def_readonly("size_easy", &StratumSizes::size_easy)
      .def_readonly("size_hard", &StratumSizes::size_hard)
      .def_readonly("gap", &StratumSizes::gap);

  py::class_<MonteCarloResult>(m, "MonteCarloResult")
      .def_readonly("report", &MonteCarloResult::report)
      .def_readonly("splits", &MonteCarloResult::splits);

  m.def("overall_bound_loose", &overall_bound_loose, py::arg("alpha"), py::arg("proxy"));
  m.def("overall_bound_tight", &overall_bound_tight, py::arg("alpha"), py::arg("proxy"));
  m.def("two_stage_run", &two_stage_run, py::arg("cal_records"), py::arg("test_records"),
        py::arg("budget"), py::arg("alpha"), py::arg("delta") = 0.05);
  m.def("stratify_difficulty", &stratify_difficulty, py::arg("test_records"),
        py::arg("budget"), py::arg("calibration"));
  m.def("run_monte_carlo", &run_monte_carlo, py::arg("dataset"), py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());
  m.def("monte_carlo", &monte_carlo, py::arg("dataset"), py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());

  // synth
  py::class_<SynthParams>(m, "SynthParams")
      .def(py::init([](std::size_t n_questions, int m_max, double difficulty_a,
                       double difficulty_b, int noise_clusters, std::uint64_t seed) {
             return SynthParams{n_questions, m_max,          difficulty_a,
                                difficulty_b, noise_clusters, seed};
           }),
           py::arg("n_questions"), py::arg("m_max"), py::arg("difficulty_a") = 1.0,
           py::arg("difficulty_b") = 1.0, py::arg("noise_clusters") = 1,
           py::arg("seed") = 0)
      .def_readwrite("n_questions", &SynthParams::n_questions)
      .def_readwrite("m_max", &SynthParams::m_max)
      .def_readwrite("difficulty_a", &SynthParams::difficulty_a)
      .def_readwrite("difficulty_b", &SynthParams::difficulty_b)
      .def_readwrite("noise_clusters", &SynthParams::noise_clusters)
      .def_readwrite("seed", &SynthParams::seed);

  m.def("generate_dataset", &generate_dataset, py::arg("params"));
  m.def("oracle_pfail", &oracle_pfail, py::arg("params"), py::arg("budget"));

  // report serialization
  m.def("report_to_csv", &report_to_csv, py::arg("report"));
  m.def("report_from_csv", &report_from_csv, py::arg("csv"));
  m.def("report_to_json", &report_to_json, py::arg("report"));
  m.def("sweep_to_csv", &sweep_to_csv, py::arg("sweep"));
  m.def("format_double", &format_double, py::arg("x"));
}
