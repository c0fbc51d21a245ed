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

#include "mird/stage1.hpp"

#include <cmath>
#include <stdexcept>

namespace mird {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
}

// log P(X <= k) for X ~ Binomial(n, p), 0 < p < 1. Terms are accumulated in
// linear space relative to pmf(0) with periodic rescaling, so the whole sum
// costs O(k) multiplications and a single log at the end.
double log_binom_cdf(std::size_t k, std::size_t n, double p) {
  const double log_pmf0 = static_cast<double>(n) * std::log1p(-p);
  const double odds = p / (1.0 - p);
  double term = 1.0;   // pmf(j) / pmf(0), rescaled
  double sum = 1.0;    // running sum of rescaled terms
  double log_scale = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    term *= odds * static_cast<double>(n - j) / static_cast<double>(j + 1);
    sum += term;
    if (term > 1e280) {
      term *= 1e-280;
      sum *= 1e-280;
      log_scale += 280.0 * std::log(10.0);
    }
  }
  return log_pmf0 + log_scale + std::log(sum);
}

}  // namespace

bool failure_indicator(const QuestionRecord& r, int budget) {
  check_budget(r, budget);
  for (int j = 0; j < budget; ++j) {
    const auto& a = r.candidates[static_cast<std::size_t>(j)].admission;
    if (!a)
      throw std::invalid_argument("record " + r.id + ": candidate " +
                                  std::to_string(j + 1) + " has no admission label");
    if (*a) return false;
  }
  return true;
}

double empirical_failure_rate(const std::vector<QuestionRecord>& records, int budget) {
  if (records.empty()) throw std::invalid_argument("no records");
  std::size_t failures = 0;
  for (const auto& r : records)
    if (failure_indicator(r, budget)) ++failures;
  return static_cast<double>(failures) / static_cast<double>(records.size());
}

double mird_bound(double emp_rate, std::size_t n_cal) {
  if (n_cal < 1) throw std::invalid_argument("n_cal must be at least 1");
  const auto n = static_cast<double>(n_cal);
  return (n * emp_rate + 1.0) / (n + 1.0);
}

double clopper_pearson_ucb(std::size_t k, std::size_t n, double delta) {
  check_delta(delta);
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (k > n) throw std::invalid_argument("k must not exceed n");
  if (k == n) return 1.0;
  if (k == 0) return -std::expm1(std::log(delta) / static_cast<double>(n));

  const double log_delta = std::log(delta);
  double lo = static_cast<double>(k) / static_cast<double>(n);
  double hi = 1.0;
  // CDF is decreasing in p and CDF(k; n, k/n) >= 1/2 >= delta, so the root
  // is bracketed. Bisect until the bracket is negligible.
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (log_binom_cdf(k, n, mid) >= log_delta)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double hoeffding_ucb(double emp_rate, std::size_t n, double delta) {
  check_delta(delta);
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const double margin = std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
  return std::min(1.0, emp_rate + margin);
}

StageOneBounds stage_one_bounds(const std::vector<QuestionRecord>& records,
                                int budget, double delta) {
  if (records.empty()) throw std::invalid_argument("no records");
  std::size_t failures = 0;
  for (const auto& r : records)
    if (failure_indicator(r, budget)) ++failures;

  StageOneBounds b;
  b.budget = budget;
  b.n_cal = records.size();
  b.failures = failures;
  b.emp_rate = static_cast<double>(failures) / static_cast<double>(records.size());
  b.mird_proxy = mird_bound(b.emp_rate, b.n_cal);
  b.ucb_clp = clopper_pearson_ucb(failures, records.size(), delta);
  b.ucb_hfd = hoeffding_ucb(b.emp_rate, records.size(), delta);
  b.delta = delta;
  return b;
}

std::vector<StageOneBounds> budget_sweep(const std::vector<QuestionRecord>& records,
                                         const std::vector<int>& budgets,
                                         double delta) {
  if (records.empty()) throw std::invalid_argument("no records");
  if (budgets.empty()) throw std::invalid_argument("no budgets");
  std::size_t m_max = records.front().candidates.size();
  for (const auto& r : records) m_max = std::min(m_max, r.candidates.size());
  int prev = 0;
  for (int m : budgets) {
    if (m <= prev)
      throw std::invalid_argument("budgets must be strictly increasing");
    if (static_cast<std::size_t>(m) > m_max)
      throw std::invalid_argument("budget " + std::to_string(m) + " exceeds m_max " +
                                  std::to_string(m_max));
    prev = m;
  }
  std::vector<StageOneBounds> sweep;
  sweep.reserve(budgets.size());
  for (int m : budgets) sweep.push_back(stage_one_bounds(records, m, delta));
  return sweep;
}

}  // namespace mird
