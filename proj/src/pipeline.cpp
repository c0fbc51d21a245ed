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

#include "mird/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "mird/numeric.hpp"
#include "mird/rng.hpp"
#include "mird/uncertainty.hpp"

namespace mird {

namespace {

// Everything a split evaluation needs about one record at one budget.
struct Prepared {
  bool failed = false;
  double gt_score = 0.0;
  double ref_score = 0.0;  // valid iff !failed
  bool top1_admissible = false;
  std::vector<double> cluster_min_scores;  // per-cluster min score, ascending
};

Prepared prepare_record(const QuestionRecord& r, int budget) {
  const auto scored = score_record(r, budget);
  Prepared p;
  p.failed = !scored.reference_score.has_value();
  p.gt_score = scored.gt_score;
  if (!p.failed) p.ref_score = *scored.reference_score;

  std::size_t top1 = 0;
  std::map<int, double> cluster_min;
  for (std::size_t j = 0; j < scored.candidate_scores.size(); ++j) {
    const double s = scored.candidate_scores[j];
    if (s < scored.candidate_scores[top1]) top1 = j;
    const auto [it, inserted] = cluster_min.emplace(r.candidates[j].cluster_id, s);
    if (!inserted && s < it->second) it->second = s;
  }
  p.top1_admissible = r.candidates[top1].admission.value();
  p.cluster_min_scores.reserve(cluster_min.size());
  for (const auto& [cluster, s] : cluster_min) p.cluster_min_scores.push_back(s);
  std::sort(p.cluster_min_scores.begin(), p.cluster_min_scores.end());
  return p;
}

// Distinct clusters whose best member passes the threshold.
std::size_t dedup_size(const Prepared& p, const Threshold& lambda) {
  if (!lambda.is_finite) return p.cluster_min_scores.size();
  return static_cast<std::size_t>(
      std::upper_bound(p.cluster_min_scores.begin(), p.cluster_min_scores.end(),
                       lambda.value) -
      p.cluster_min_scores.begin());
}

// Per (split, budget) calibration state shared by all alpha cells.
struct BudgetCalibration {
  StageOneBounds stage1;
  std::vector<double> full_scores;  // sorted gt scores, all calibration records
  std::vector<double> so_scores;    // sorted gt scores, successful records only
};

BudgetCalibration calibrate_budget(const std::vector<Prepared>& prepared,
                                   std::span<const std::size_t> cal, int budget,
                                   double delta) {
  BudgetCalibration bc;
  bc.full_scores.reserve(cal.size());
  std::size_t failures = 0;
  for (std::size_t i : cal) {
    const Prepared& p = prepared[i];
    bc.full_scores.push_back(p.gt_score);
    if (p.failed)
      ++failures;
    else
      bc.so_scores.push_back(p.gt_score);
  }
  std::sort(bc.full_scores.begin(), bc.full_scores.end());
  std::sort(bc.so_scores.begin(), bc.so_scores.end());

  bc.stage1.budget = budget;
  bc.stage1.n_cal = cal.size();
  bc.stage1.failures = failures;
  bc.stage1.emp_rate = static_cast<double>(failures) / static_cast<double>(cal.size());
  bc.stage1.mird_proxy = mird_bound(bc.stage1.emp_rate, cal.size());
  bc.stage1.ucb_clp = clopper_pearson_ucb(failures, cal.size(), delta);
  bc.stage1.ucb_hfd = hoeffding_ucb(bc.stage1.emp_rate, cal.size(), delta);
  bc.stage1.delta = delta;
  return bc;
}

Threshold rank_threshold(const std::vector<double>& sorted_scores, double alpha) {
  const std::size_t k = conformal_rank(sorted_scores.size(), alpha);
  return k <= sorted_scores.size() ? Threshold::finite(sorted_scores[k - 1])
                                   : Threshold::infinite();
}

CellOutcome run_cell(const std::vector<Prepared>& prepared,
                     const BudgetCalibration& bc,
                     std::span<const std::size_t> test, int budget, double alpha) {
  CellOutcome cell;
  cell.budget = budget;
  cell.alpha = alpha;
  cell.stage1 = bc.stage1;
  cell.lambda_full = rank_threshold(bc.full_scores, alpha);
  if (!bc.so_scores.empty()) cell.lambda_so = rank_threshold(bc.so_scores, alpha);

  double easy_sum = 0.0, hard_sum = 0.0;
  std::size_t easy_count = 0, hard_count = 0;
  for (std::size_t i : test) {
    const Prepared& p = prepared[i];
    const bool covered = !p.failed && cell.lambda_full.admits(p.ref_score);
    if (!covered) ++cell.n_miscovered;
    if (p.failed) {
      ++cell.n_failed_test;
    } else {
      if (!covered) ++cell.n_z0_miscovered;
      const auto size = static_cast<double>(dedup_size(p, cell.lambda_full));
      if (p.top1_admissible) {
        easy_sum += size;
        ++easy_count;
      } else {
        hard_sum += size;
        ++hard_count;
      }
    }
  }
  cell.n_test = test.size();
  cell.sampling_risk =
      static_cast<double>(cell.n_failed_test) / static_cast<double>(cell.n_test);
  cell.overall_risk =
      static_cast<double>(cell.n_miscovered) / static_cast<double>(cell.n_test);
  const std::size_t n_z0 = cell.n_test - cell.n_failed_test;
  if (n_z0 > 0)
    cell.cond_sel_risk =
        static_cast<double>(cell.n_z0_miscovered) / static_cast<double>(n_z0);
  if (easy_count > 0) cell.size_easy = easy_sum / static_cast<double>(easy_count);
  if (hard_count > 0) cell.size_hard = hard_sum / static_cast<double>(hard_count);
  return cell;
}

std::vector<CellOutcome> run_split(const std::vector<std::vector<Prepared>>& prepared,
                                   std::span<const std::size_t> cal,
                                   std::span<const std::size_t> test,
                                   const std::vector<int>& budgets,
                                   const std::vector<double>& alphas, double delta) {
  std::vector<CellOutcome> cells;
  cells.reserve(budgets.size() * alphas.size());
  for (std::size_t b = 0; b < budgets.size(); ++b) {
    const auto bc = calibrate_budget(prepared[b], cal, budgets[b], delta);
    for (double alpha : alphas)
      cells.push_back(run_cell(prepared[b], bc, test, budgets[b], alpha));
  }
  return cells;
}

void check_spec(const Dataset& dataset, const SplitSpec& spec) {
  if (dataset.records.size() < 2)
    throw std::invalid_argument("need at least two records to split");
  if (spec.n_splits < 1) throw std::invalid_argument("n_splits must be positive");
  if (!(spec.ratio > 0.0 && spec.ratio < 1.0))
    throw std::invalid_argument("ratio must lie in (0,1)");
  if (!(spec.delta > 0.0 && spec.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  if (spec.budgets.empty()) throw std::invalid_argument("no budgets");
  if (spec.alphas.empty()) throw std::invalid_argument("no alphas");
  int prev = 0;
  for (int m : spec.budgets) {
    if (m <= prev) throw std::invalid_argument("budgets must be strictly increasing");
    if (m > dataset.m_max)
      throw std::invalid_argument("budget " + std::to_string(m) + " exceeds m_max " +
                                  std::to_string(dataset.m_max));
    prev = m;
  }
  for (double a : spec.alphas)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

template <class T>
std::vector<double> collect(const std::vector<std::vector<CellOutcome>>& splits,
                            std::size_t cell, T getter) {
  std::vector<double> xs;
  xs.reserve(splits.size());
  for (const auto& s : splits) xs.push_back(getter(s[cell]));
  return xs;
}

std::optional<Threshold> mean_threshold(const std::vector<Threshold>& ts) {
  if (ts.empty()) return std::nullopt;
  std::vector<double> values;
  values.reserve(ts.size());
  for (const auto& t : ts) {
    if (!t.is_finite) return Threshold::infinite();
    values.push_back(t.value);
  }
  return Threshold::finite(mean(values));
}

ReportRow aggregate_cell(const std::vector<std::vector<CellOutcome>>& splits,
                         std::size_t cell) {
  const CellOutcome& first = splits.front()[cell];
  ReportRow row;
  row.budget = first.budget;
  row.alpha = first.alpha;

  const auto sampling =
      collect(splits, cell, [](const CellOutcome& c) { return c.sampling_risk; });
  const auto proxy =
      collect(splits, cell, [](const CellOutcome& c) { return c.stage1.mird_proxy; });
  const auto clp =
      collect(splits, cell, [](const CellOutcome& c) { return c.stage1.ucb_clp; });
  const auto hfd =
      collect(splits, cell, [](const CellOutcome& c) { return c.stage1.ucb_hfd; });
  const auto overall =
      collect(splits, cell, [](const CellOutcome& c) { return c.overall_risk; });

  row.sampling_risk = mean(sampling);
  row.mird_proxy_mean = mean(proxy);
  row.ucb_clp_mean = mean(clp);
  row.ucb_hfd_mean = mean(hfd);
  row.overall_risk = mean(overall);
  row.bound_loose = overall_bound_loose(row.alpha, row.mird_proxy_mean);
  row.bound_tight = overall_bound_tight(row.alpha, row.mird_proxy_mean);
  row.sampling_risk_se = standard_error(sampling);
  row.mird_proxy_se = standard_error(proxy);
  row.overall_risk_se = standard_error(overall);

  std::vector<double> cond, easy, hard;
  std::vector<Threshold> lam_full, lam_so;
  for (const auto& s : splits) {
    const CellOutcome& c = s[cell];
    if (c.cond_sel_risk) cond.push_back(*c.cond_sel_risk);
    if (c.size_easy) easy.push_back(*c.size_easy);
    if (c.size_hard) hard.push_back(*c.size_hard);
    lam_full.push_back(c.lambda_full);
    if (c.lambda_so) lam_so.push_back(*c.lambda_so);
  }
  row.n_effective_splits = cond.size();
  if (!cond.empty()) {
    row.cond_sel_risk = mean(cond);
    row.cond_sel_risk_se = standard_error(cond);
  }
  if (!easy.empty()) row.size_easy = mean(easy);
  if (!hard.empty()) row.size_hard = mean(hard);
  if (row.size_easy && row.size_hard) row.gap = *row.size_hard - *row.size_easy;
  row.lambda_full_mean = *mean_threshold(lam_full);
  row.lambda_so_mean = mean_threshold(lam_so);
  return row;
}

}  // namespace

double overall_bound_loose(double alpha, double proxy) { return alpha + proxy; }

double overall_bound_tight(double alpha, double proxy) {
  return alpha + (1.0 - alpha) * proxy;
}

CellOutcome two_stage_run(const std::vector<QuestionRecord>& cal_records,
                          const std::vector<QuestionRecord>& test_records,
                          int budget, double alpha, double delta) {
  if (cal_records.empty()) throw std::invalid_argument("no calibration records");
  if (test_records.empty()) throw std::invalid_argument("no test records");

  std::vector<Prepared> prepared;
  prepared.reserve(cal_records.size() + test_records.size());
  std::vector<std::size_t> cal, test;
  for (const auto& r : cal_records) {
    cal.push_back(prepared.size());
    prepared.push_back(prepare_record(r, budget));
  }
  for (const auto& r : test_records) {
    test.push_back(prepared.size());
    prepared.push_back(prepare_record(r, budget));
  }
  const auto bc = calibrate_budget(prepared, cal, budget, delta);
  return run_cell(prepared, bc, test, budget, alpha);
}

StratumSizes stratify_difficulty(const std::vector<QuestionRecord>& test_records,
                                 int budget, const ConformalCalibration& calibration) {
  double easy_sum = 0.0, hard_sum = 0.0;
  std::size_t easy_count = 0, hard_count = 0;
  for (const auto& r : test_records) {
    if (failure_indicator(r, budget)) continue;
    const auto scores = cluster_frequency_uncertainty(r, budget);
    std::size_t top1 = 0;
    for (std::size_t j = 1; j < scores.size(); ++j)
      if (scores[j] < scores[top1]) top1 = j;
    const auto set = prediction_set(r, budget, calibration);
    const auto size = static_cast<double>(set.dedup_size);
    if (r.candidates[top1].admission.value()) {
      easy_sum += size;
      ++easy_count;
    } else {
      hard_sum += size;
      ++hard_count;
    }
  }
  StratumSizes s;
  if (easy_count > 0) s.size_easy = easy_sum / static_cast<double>(easy_count);
  if (hard_count > 0) s.size_hard = hard_sum / static_cast<double>(hard_count);
  if (s.size_easy && s.size_hard) s.gap = *s.size_hard - *s.size_easy;
  return s;
}

MonteCarloResult run_monte_carlo(const Dataset& dataset, const SplitSpec& spec) {
  check_spec(dataset, spec);
  const std::size_t n = dataset.records.size();
  const auto n_cal =
      static_cast<std::size_t>(guarded_ceil(spec.ratio * static_cast<double>(n)));
  if (n_cal < 1 || n_cal >= n)
    throw std::invalid_argument("ratio leaves an empty calibration or test side");

  // Shuffles are keyed on id-sorted order, so input ordering is irrelevant.
  std::vector<std::size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return dataset.records[a].id < dataset.records[b].id;
  });

  std::vector<std::vector<Prepared>> prepared(spec.budgets.size());
  for (std::size_t b = 0; b < spec.budgets.size(); ++b) {
    prepared[b].reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      prepared[b].push_back(prepare_record(dataset.records[by_id[i]], spec.budgets[b]));
  }

  MonteCarloResult result;
  result.splits.resize(spec.n_splits);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    std::vector<std::size_t> perm(n);
    for (;;) {
      const std::size_t s = next.fetch_add(1);
      if (s >= spec.n_splits) return;
      try {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::mt19937_64 rng(spec.base_seed ^ static_cast<std::uint64_t>(s));
        fisher_yates(perm, rng);
        const std::span<const std::size_t> cal(perm.data(), n_cal);
        const std::span<const std::size_t> test(perm.data() + n_cal, n - n_cal);
        result.splits[s] =
            run_split(prepared, cal, test, spec.budgets, spec.alphas, spec.delta);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  unsigned n_workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers)
                                        : std::thread::hardware_concurrency();
  n_workers = std::max(1u, std::min<unsigned>(n_workers, spec.n_splits));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  const std::size_t n_cells = spec.budgets.size() * spec.alphas.size();
  result.report.rows.reserve(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c)
    result.report.rows.push_back(aggregate_cell(result.splits, c));
  return result;
}

PipelineReport monte_carlo(const Dataset& dataset, const SplitSpec& spec) {
  return run_monte_carlo(dataset, spec).report;
}

}  // namespace mird
