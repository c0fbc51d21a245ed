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
//
// End-to-end acceptance suite. Each test case prints one PASS/FAIL line.

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "mird/conformal.hpp"
#include "mird/numeric.hpp"
#include "mird/pipeline.hpp"
#include "mird/records.hpp"
#include "mird/rng.hpp"
#include "mird/report_io.hpp"
#include "mird/stage1.hpp"
#include "mird/synth.hpp"
#include "mird/uncertainty.hpp"

extern std::string g_cli_path;

using namespace mird;

namespace {

void conclude(int n, const std::string& what, bool ok) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) / 9007199254740992.0;
}

// Independent binomial CDF oracle: per-term lgamma evaluation in long
// double with Kahan-compensated summation.
long double oracle_binom_cdf(std::size_t k, std::size_t n, long double p) {
  if (p <= 0.0L) return 1.0L;
  if (p >= 1.0L) return k >= n ? 1.0L : 0.0L;
  long double sum = 0.0L, c = 0.0L;
  for (std::size_t j = 0; j <= k; ++j) {
    const long double log_term = std::lgamma(static_cast<long double>(n) + 1.0L) -
                                 std::lgamma(static_cast<long double>(j) + 1.0L) -
                                 std::lgamma(static_cast<long double>(n - j) + 1.0L) +
                                 static_cast<long double>(j) * std::log(p) +
                                 static_cast<long double>(n - j) * std::log1p(-p);
    const long double term = std::exp(log_term);
    const long double y = term - c;
    const long double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double oracle_cp_bisection(std::size_t k, std::size_t n, double delta) {
  long double lo = static_cast<long double>(k) / static_cast<long double>(n);
  long double hi = 1.0L;
  for (int i = 0; i < 300 && hi - lo > 1e-16L; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (oracle_binom_cdf(k, n, mid) >= static_cast<long double>(delta))
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// The fixed synthetic evaluation shared by criteria 3, 4, 7, 8, 9, 10.
struct BigRun {
  SynthParams params;
  Dataset data;
  SplitSpec spec;
  MonteCarloResult result;
  double seconds = 0.0;
};

const BigRun& big_run() {
  static const BigRun run = [] {
    BigRun r;
    r.params = SynthParams{.n_questions = 4000,
                           .m_max = 20,
                           .difficulty_a = 2.0,
                           .difficulty_b = 2.0,
                           .noise_clusters = 3,
                           .seed = 20260810};
    r.data = generate_dataset(r.params);
    r.spec.n_splits = 500;
    r.spec.ratio = 0.5;
    r.spec.base_seed = 20260810;
    r.spec.budgets = {5, 10, 15, 20};
    r.spec.alphas = {0.1, 0.2, 0.3};
    r.spec.delta = 0.05;
    const auto start = std::chrono::steady_clock::now();
    r.result = run_monte_carlo(r.data, r.spec);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
    return r;
  }();
  return run;
}

std::vector<double> cell_values(const MonteCarloResult& result, std::size_t cell,
                                double (*getter)(const CellOutcome&)) {
  std::vector<double> xs;
  xs.reserve(result.splits.size());
  for (const auto& s : result.splits) xs.push_back(getter(s[cell]));
  return xs;
}

int run_command(const std::string& command) { return std::system(command.c_str()); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("criterion 1: leave-one-out proxy bound oracle") {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  bool ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t len = 2 + rng() % 11;  // N+1 in {2..12}
    std::vector<int> z(len);
    int total = 0;
    for (auto& zi : z) {
      zi = static_cast<int>(rng() & 1);
      total += zi;
    }
    const std::size_t n = len - 1;
    double held_mean = 0.0, proxy_mean = 0.0;
    for (std::size_t held = 0; held < len; ++held) {
      held_mean += z[held];
      proxy_mean += mird_bound(
          static_cast<double>(total - z[held]) / static_cast<double>(n), n);
    }
    held_mean /= static_cast<double>(len);
    proxy_mean /= static_cast<double>(len);
    const double expected_gap = (static_cast<double>(len) - total) /
                                (static_cast<double>(len) * static_cast<double>(len));
    ok = ok && held_mean <= proxy_mean + 1e-12;
    ok = ok && std::fabs((proxy_mean - held_mean) - expected_gap) <= 1e-12;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 1.0;
  CHECK(secs < 1.0);
  CHECK(ok);
  conclude(1, "leave-one-out mean(Z) <= mean(proxy) with exact gap (N+1-sum)/(N+1)^2",
           ok);
}

TEST_CASE("criterion 2: exact conformal coverage on exhaustive folds") {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2);
  bool ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n1 = 2 + rng() % 7;  // N+1 in {2..8}
    std::vector<double> scores;
    while (scores.size() < n1) {
      const double s = uniform01(rng);
      if (std::find(scores.begin(), scores.end(), s) == scores.end())
        scores.push_back(s);
    }
    for (int pct = 5; pct <= 50; pct += 5) {
      const auto f = exhaustive_coverage_oracle(scores, pct / 100.0);
      // exact rank over integers at fold calibration size N = n1 - 1:
      // ceil(n1 * (100-pct) / 100) = (n1*(100-pct) + 99) / 100
      const std::size_t expected =
          (n1 * static_cast<std::size_t>(100 - pct) + 99) / 100;
      ok = ok && f.total == n1 && f.covered == expected;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 1.0;
  CHECK(secs < 1.0);
  CHECK(ok);
  conclude(2, "exhaustive coverage equals ceil((N+1)(1-alpha))/(N+1) exactly", ok);
}

TEST_CASE("criterion 3: synthetic end-to-end validity") {
  const auto& run = big_run();
  const std::size_t n_alphas = run.spec.alphas.size();
  bool ok = true;

  for (std::size_t b = 0; b < run.spec.budgets.size(); ++b) {
    const std::size_t cell0 = b * n_alphas;  // sampling stats are alpha-invariant
    const auto sampling = cell_values(run.result, cell0,
                                      [](const CellOutcome& c) { return c.sampling_risk; });
    const auto proxy = cell_values(
        run.result, cell0, [](const CellOutcome& c) { return c.stage1.mird_proxy; });

    // (a) mean sampling risk <= mean proxy + 2 SE of the paired difference
    std::vector<double> diff(sampling.size());
    for (std::size_t s = 0; s < diff.size(); ++s) diff[s] = proxy[s] - sampling[s];
    const double se_diff = standard_error(diff).value();
    const bool a_ok = mean(sampling) <= mean(proxy) + 2.0 * se_diff;
    CHECK(a_ok);
    ok = ok && a_ok;

    // (d) the proxy undercuts both PAC baselines at every budget
    const auto clp = cell_values(run.result, cell0,
                                 [](const CellOutcome& c) { return c.stage1.ucb_clp; });
    const auto hfd = cell_values(run.result, cell0,
                                 [](const CellOutcome& c) { return c.stage1.ucb_hfd; });
    const bool d_ok = mean(proxy) < mean(clp) && mean(proxy) < mean(hfd);
    CHECK(d_ok);
    ok = ok && d_ok;

    for (std::size_t a = 0; a < n_alphas; ++a) {
      const std::size_t cell = b * n_alphas + a;
      const double alpha = run.spec.alphas[a];

      // (b) conditional selection risk is controlled at alpha
      std::vector<double> cond;
      for (const auto& s : run.result.splits)
        if (s[cell].cond_sel_risk) cond.push_back(*s[cell].cond_sel_risk);
      const bool b_ok = !cond.empty() &&
                        mean(cond) <= alpha + 2.0 * standard_error(cond).value();
      CHECK(b_ok);
      ok = ok && b_ok;

      // (c) overall miscoverage under the tight bound, tight under loose
      std::vector<double> excess;
      excess.reserve(run.result.splits.size());
      for (const auto& s : run.result.splits)
        excess.push_back(s[cell].overall_risk -
                         overall_bound_tight(alpha, s[cell].stage1.mird_proxy));
      const bool c_ok = mean(excess) <= 2.0 * standard_error(excess).value();
      CHECK(c_ok);
      ok = ok && c_ok;
      const auto& row = run.result.report.rows[cell];
      const bool cb_ok = row.overall_risk <= row.bound_tight + 2.0 * standard_error(excess).value() &&
                         row.bound_tight <= row.bound_loose;
      CHECK(cb_ok);
      ok = ok && cb_ok;
    }
  }

  ok = ok && run.seconds < 120.0;
  CHECK(run.seconds < 120.0);
  CHECK(ok);
  std::ostringstream what;
  what << "Q=4000 S=500 validity (a)-(d), " << format_double(run.seconds) << "s";
  conclude(3, what.str(), ok);
}

TEST_CASE("criterion 4: empirical failure rate matches the closed-form oracle") {
  const auto& run = big_run();
  bool ok = true;
  const auto q = static_cast<double>(run.params.n_questions);
  for (int m = 1; m <= 20; ++m) {
    const double oracle = oracle_pfail(run.params, m);
    const double emp = empirical_failure_rate(run.data.records, m);
    const double tol = 3.0 * std::sqrt(oracle * (1.0 - oracle) / q);
    const bool within = std::fabs(emp - oracle) <= tol;
    CHECK(within);
    ok = ok && within;
  }
  // the Monte Carlo sampling risk tracks the same oracle (split noise on top)
  for (std::size_t b = 0; b < run.spec.budgets.size(); ++b) {
    const auto& row = run.result.report.rows[b * run.spec.alphas.size()];
    const double oracle = oracle_pfail(run.params, run.spec.budgets[b]);
    const double tol = 3.0 * std::sqrt(oracle * (1.0 - oracle) / q) +
                       3.0 * row.sampling_risk_se.value();
    const bool within = std::fabs(row.sampling_risk - oracle) <= tol;
    CHECK(within);
    ok = ok && within;
  }
  conclude(4, "empirical p_fail(M) within 3 binomial sigmas of the Beta product form",
           ok);
}

TEST_CASE("criterion 5: Clopper-Pearson numerics") {
  bool ok = true;
  // closed form vs bisection at k = 0
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 10000;
    const double delta = 0.001 + 0.499 * uniform01(rng);
    const double closed = clopper_pearson_ucb(0, n, delta);
    ok = ok && std::fabs(closed - oracle_cp_bisection(0, n, delta)) <= 1e-9;
  }
  CHECK(ok);

  // 500 random triples: the returned bound solves CDF(k; n, p*) = delta
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 10000;
    const std::size_t k = rng() % n;
    const double delta = 0.001 + 0.499 * uniform01(rng);
    const double p = clopper_pearson_ucb(k, n, delta);
    const double cdf_gap =
        std::fabs(static_cast<double>(oracle_binom_cdf(k, n, p)) - delta);
    const bool solved = cdf_gap <= 1e-8;
    if (!solved) {
      CAPTURE(k);
      CAPTURE(n);
      CAPTURE(delta);
      CHECK(solved);
    }
    ok = ok && solved;
  }

  // monotone in k (non-decreasing) and in delta (non-increasing)
  for (std::size_t n : {20u, 333u, 5000u}) {
    double prev = -1.0;
    for (std::size_t k = 0; k <= n; k += std::max<std::size_t>(1, n / 40)) {
      const double p = clopper_pearson_ucb(k, n, 0.05);
      ok = ok && p >= prev;
      prev = p;
    }
    for (std::size_t k : {0u, 2u, 11u}) {
      double prev_d = 2.0;
      for (double delta : {0.005, 0.05, 0.2, 0.45}) {
        const double p = clopper_pearson_ucb(k, n, delta);
        ok = ok && p <= prev_d;
        prev_d = p;
      }
    }
  }
  CHECK(ok);
  conclude(5, "closed form, CDF(k;n,p*)=delta to 1e-8, and UCB monotonicity", ok);
}

TEST_CASE("criterion 6: monotone enlargement of successful-only calibration") {
  std::mt19937_64 rng(6);
  bool ok = true;
  int accepted = 0;
  while (accepted < 1000) {
    // failure rates stay below ~0.17 here, so the successful-only quantile
    // rank never reaches its sentinel while the full rank stays in range
    const SynthParams params{.n_questions = 50 + rng() % 201,
                             .m_max = 5 + static_cast<int>(rng() % 8),
                             .difficulty_a = 1.5 + 1.5 * uniform01(rng),
                             .difficulty_b = 0.8 + 1.2 * uniform01(rng),
                             .noise_clusters = 1 + static_cast<int>(rng() % 3),
                             .seed = rng()};
    const auto data = generate_dataset(params);
    const int m = params.m_max;
    std::size_t failed = 0;
    for (const auto& r : data.records)
      if (failure_indicator(r, m)) ++failed;
    if (failed == 0 || failed == data.records.size()) continue;
    ++accepted;

    const double alpha = 0.05 + 0.45 * uniform01(rng);
    const auto full = calibrate_full(data.records, m, alpha);
    const auto so = calibrate_successful_only(data.records, m, alpha);
    const bool lam_ok = !threshold_less(full.threshold, so.threshold);
    ok = ok && lam_ok;
    if (!lam_ok) {
      CAPTURE(alpha);
      CHECK(lam_ok);
    }

    const auto probe = generate_dataset({.n_questions = 15,
                                         .m_max = m,
                                         .difficulty_a = params.difficulty_a,
                                         .difficulty_b = params.difficulty_b,
                                         .noise_clusters = params.noise_clusters,
                                         .seed = rng()});
    for (const auto& r : probe.records) {
      const auto wide = prediction_set(r, m, full);
      const auto narrow = prediction_set(r, m, so);
      ok = ok && std::includes(wide.member_indices.begin(), wide.member_indices.end(),
                               narrow.member_indices.begin(),
                               narrow.member_indices.end());
    }
  }
  CHECK(ok);
  conclude(6, "lambda_full >= lambda_so and full-calibration sets are supersets", ok);
}

TEST_CASE("criterion 7: per-split miscoverage decomposition identity") {
  const auto& run = big_run();
  bool ok = true;
  for (const auto& split : run.result.splits)
    for (const auto& cell : split)
      ok = ok && cell.n_miscovered == cell.n_failed_test + cell.n_z0_miscovered;
  CHECK(ok);

  // independent per-record route on a few splits of the same evaluation
  std::vector<std::size_t> order(run.data.records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return run.data.records[a].id < run.data.records[b].id;
  });
  const std::size_t n_cal = order.size() / 2;
  for (std::size_t s = 0; s < 2; ++s) {
    std::vector<std::size_t> perm(order.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::mt19937_64 rng(run.spec.base_seed ^ s);
    fisher_yates(perm, rng);
    std::vector<QuestionRecord> cal, test;
    for (std::size_t i = 0; i < perm.size(); ++i)
      (i < n_cal ? cal : test).push_back(run.data.records[order[perm[i]]]);
    const auto calib = calibrate_full(cal, 5, 0.1);
    std::size_t failed = 0, z0_mis = 0, mis = 0;
    for (const auto& r : test) {
      const bool z = failure_indicator(r, 5);
      const auto set = prediction_set(r, 5, calib);
      if (!*set.covered) ++mis;
      if (z)
        ++failed;
      else if (!*set.covered)
        ++z0_mis;
    }
    const auto& cell = run.result.splits[s][0];  // budget 5, alpha 0.1
    ok = ok && cell.lambda_full == calib.threshold;
    ok = ok && mis == cell.n_miscovered && failed == cell.n_failed_test &&
         z0_mis == cell.n_z0_miscovered && mis == failed + z0_mis;
  }
  CHECK(ok);
  conclude(7, "overall miscoverage count = failed count + Z=0 miscoverage count", ok);
}

TEST_CASE("criterion 8: loose/tight bound gap identity") {
  const auto& run = big_run();
  bool ok = true;
  for (const auto& row : run.result.report.rows)
    ok = ok && std::fabs((row.bound_loose - row.bound_tight) -
                         row.alpha * row.mird_proxy_mean) <= 1e-12;
  // spot value: alpha 0.1, proxy 0.05 gives gap 0.005
  ok = ok && std::fabs((overall_bound_loose(0.1, 0.05) - overall_bound_tight(0.1, 0.05)) -
                       0.005) <= 1e-12;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = uniform01(rng);
    const double proxy = uniform01(rng);
    ok = ok && std::fabs((overall_bound_loose(alpha, proxy) -
                          overall_bound_tight(alpha, proxy)) -
                         alpha * proxy) <= 1e-12;
  }
  CHECK(ok);
  conclude(8, "bound_loose - bound_tight = alpha * proxy to 1e-12 on every row", ok);
}

TEST_CASE("criterion 9: proxy-risk gap matches the 1/(N+1) pattern") {
  const auto& run = big_run();
  const double n_cal = 2000.0;
  bool ok = true;
  for (std::size_t b = 0; b < run.spec.budgets.size(); ++b) {
    const std::size_t cell = b * run.spec.alphas.size();
    const auto sampling = cell_values(run.result, cell,
                                      [](const CellOutcome& c) { return c.sampling_risk; });
    const auto proxy = cell_values(
        run.result, cell, [](const CellOutcome& c) { return c.stage1.mird_proxy; });
    std::vector<double> gap(sampling.size());
    for (std::size_t s = 0; s < gap.size(); ++s) gap[s] = proxy[s] - sampling[s];
    const double target = (1.0 - mean(sampling)) / (n_cal + 1.0);
    const double dev = std::fabs(mean(gap) - target);
    const double band = 2.0 * standard_error(gap).value();
    const bool within = dev <= band;
    if (!within) {
      CAPTURE(run.spec.budgets[b]);
      CAPTURE(dev);
      CAPTURE(band);
      CHECK(within);
    }
    ok = ok && within;
  }
  CHECK(ok);
  conclude(9, "mean(proxy) - mean(risk) = (1 - mean risk)/(N+1) within 2 SE", ok);
}

TEST_CASE("criterion 10: nesting invariants") {
  const auto& run = big_run();
  bool ok = true;
  for (const auto& r : run.data.records) {
    bool prev = failure_indicator(r, 1);
    for (int m = 2; m <= 20; ++m) {
      const bool z = failure_indicator(r, m);
      ok = ok && (prev || !z);  // Z never turns back on as the budget grows
      prev = z;
    }
  }
  CHECK(ok);

  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& r = run.data.records[rng() % run.data.records.size()];
    double l1 = uniform01(rng);
    double l2 = uniform01(rng);
    if (l2 < l1) std::swap(l1, l2);
    const auto small = prediction_set(r, 20, Threshold::finite(l1));
    const auto large = prediction_set(r, 20, Threshold::finite(l2));
    ok = ok && std::includes(large.member_indices.begin(), large.member_indices.end(),
                             small.member_indices.begin(), small.member_indices.end());
  }
  CHECK(ok);
  conclude(10, "Z non-increasing in M; prediction sets nested in lambda", ok);
}

TEST_CASE("criterion 11: byte-identical CLI evaluation, worker-invariant") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("mird_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string data = (dir / "data.jsonl").string();
  const std::string quiet = " 2> /dev/null";

  bool ok = true;
  ok = ok && run_command(g_cli_path + " simulate --questions 400 --m-max 12" +
                         " --difficulty-a 2 --difficulty-b 2 --clusters 3 --seed 5 -o " +
                         data + quiet) == 0;

  const std::string eval_args =
      " evaluate -i " + data +
      " --budgets 4,8,12 --alphas 0.1,0.2 --splits 60 --ratio 0.5 --seed 9 --delta 0.05";
  const std::string out1 = (dir / "out1.csv").string();
  const std::string out2 = (dir / "out2.csv").string();
  const std::string out3 = (dir / "out3.csv").string();
  ok = ok && run_command(g_cli_path + eval_args + " --workers 1 -o " + out1 + quiet) == 0;
  ok = ok && run_command(g_cli_path + eval_args + " --workers 4 -o " + out2 + quiet) == 0;
  ok = ok && run_command(g_cli_path + eval_args + " --workers 1 -o " + out3 + quiet) == 0;
  CHECK(ok);

  const auto bytes1 = read_file(out1);
  ok = ok && !bytes1.empty();
  ok = ok && bytes1 == read_file(out2);
  ok = ok && bytes1 == read_file(out3);
  CHECK(ok);

  fs::remove_all(dir);
  conclude(11, "evaluate output bytes identical across runs and --workers", ok);
}

TEST_CASE("cli surface: sweep ordering, calibrate table, strict-alpha predictions") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("mird_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string data = (dir / "data.jsonl").string();
  const std::string quiet = " 2> /dev/null";

  REQUIRE(run_command(g_cli_path + " simulate --questions 1000 --m-max 20 --seed 7 -o " +
                      data + quiet) == 0);

  const std::string sweep_path = (dir / "sweep.csv").string();
  REQUIRE(run_command(g_cli_path + " bound -i " + data + " --budgets 5,10,15,20 -o " +
                      sweep_path + quiet) == 0);
  const auto sweep = parse_csv_cells(read_file(sweep_path));
  REQUIRE(sweep.size() == 5);
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const double bound = std::stod(sweep[i][4]);
    CHECK(bound <= std::stod(sweep[i][5]));  // mird_bound <= ucb_clp
    CHECK(bound <= std::stod(sweep[i][6]));  // mird_bound <= ucb_hfd
  }

  const std::string cal_path = (dir / "cal.csv").string();
  REQUIRE(run_command(g_cli_path + " calibrate -i " + data +
                      " --budgets 5,10 --alphas 0.1,0.3 -o " + cal_path + quiet) == 0);
  const auto cal = parse_csv_cells(read_file(cal_path));
  REQUIRE(cal.size() == 5);
  for (std::size_t i = 1; i < cal.size(); ++i)
    CHECK_FALSE(threshold_less(parse_threshold(cal[i][4]), parse_threshold(cal[i][7])));

  // a near-degenerate risk level keeps only the smallest calibration score,
  // so prediction sets collapse to full-consensus candidates or nothing
  const std::string spread = (dir / "spread.jsonl").string();
  REQUIRE(run_command(g_cli_path +
                      " simulate --questions 1000 --m-max 5 --clusters 3 --seed 8 -o " +
                      spread + quiet) == 0);
  const std::string pred_path = (dir / "pred.csv").string();
  REQUIRE(run_command(g_cli_path + " predict -i " + spread +
                      " --budget 5 --alpha 0.99 --calibration " + spread + " -o " +
                      pred_path + quiet) == 0);
  const auto pred = parse_csv_cells(read_file(pred_path));
  REQUIRE(pred.size() == 1001);
  double mean_members = 0.0;
  std::size_t empty_sets = 0;
  for (std::size_t i = 1; i < pred.size(); ++i) {
    mean_members += std::stod(pred[i][1]);
    if (pred[i][1] == "0") ++empty_sets;
  }
  mean_members /= 1000.0;
  CHECK(mean_members < 1.0);
  CHECK(empty_sets > 500);

  CHECK(run_command(g_cli_path + " bound -i " + data + " --budgets 5 --frobnicate" +
                    quiet + " > /dev/null") != 0);
  CHECK(run_command(g_cli_path + " evaluate -i " + data + " --budgets 30 --alphas 0.1" +
                    quiet + " > /dev/null") != 0);

  // the structured-text report form carries the same rows
  const std::string json_path = (dir / "report.json").string();
  REQUIRE(run_command(g_cli_path + " evaluate -i " + data +
                      " --budgets 5,10 --alphas 0.2 --splits 10 --seed 2" +
                      " --format json -o " + json_path + quiet) == 0);
  const auto json_text = read_file(json_path);
  CHECK(json_text.find("\"rows\"") != std::string::npos);
  CHECK(json_text.find("\"mird_bound\"") != std::string::npos);

  fs::remove_all(dir);
}
