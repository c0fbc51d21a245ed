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
#include <vector>

#include "mird/records.hpp"

namespace mird {

/// Sampling-failure summary at one budget: the empirical failure rate on
/// the calibration set, the exchangeability-corrected proxy bound, and the
/// two (1-delta)-level PAC-style baselines.
struct StageOneBounds {
  int budget = 0;
  std::size_t n_cal = 0;
  std::size_t failures = 0;
  double emp_rate = 0.0;
  double mird_proxy = 0.0;
  double ucb_clp = 0.0;
  double ucb_hfd = 0.0;
  double delta = 0.0;
};

/// 1 iff no candidate in the budget prefix is admissible.
bool failure_indicator(const QuestionRecord& r, int budget);

double empirical_failure_rate(const std::vector<QuestionRecord>& records, int budget);

/// (N * emp_rate + 1) / (N + 1): the calibration-dependent proxy whose
/// expectation upper-bounds the test-time sampling-failure probability.
double mird_bound(double emp_rate, std::size_t n_cal);

/// Exact one-sided (1-delta) binomial upper confidence bound: the p* with
/// BinomCDF(k; n, p*) = delta, found by bisection on [k/n, 1]. Closed forms
/// at k = 0 (1 - delta^(1/n)) and k = n (1).
double clopper_pearson_ucb(std::size_t k, std::size_t n, double delta);

/// min(1, emp_rate + sqrt(ln(1/delta) / (2n))).
double hoeffding_ucb(double emp_rate, std::size_t n, double delta);

StageOneBounds stage_one_bounds(const std::vector<QuestionRecord>& records,
                                int budget, double delta);

/// One StageOneBounds per budget; budgets must be strictly increasing and
/// no larger than the minimum candidate count.
std::vector<StageOneBounds> budget_sweep(const std::vector<QuestionRecord>& records,
                                         const std::vector<int>& budgets,
                                         double delta);

}  // namespace mird
