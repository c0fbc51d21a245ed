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

#include <doctest.h>

#include <stdexcept>

#include <vector>

#include "mird/synth.hpp"
#include "mird/uncertainty.hpp"

using namespace mird;

namespace {

QuestionRecord make_record(std::vector<int> clusters, std::vector<int> admissions,
                           std::optional<int> gt_cluster = std::nullopt) {
  QuestionRecord r;
  r.id = "r";
  r.gt_cluster = gt_cluster;
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    Candidate c;
    c.cluster_id = clusters[j];
    c.admission = admissions[j] == 1;
    r.candidates.push_back(c);
  }
  return r;
}

}  // namespace

TEST_CASE("cluster frequency uncertainty") {
  SUBCASE("count and divide") {
    const auto r = make_record({0, 0, 1}, {1, 1, 0});
    const auto s = cluster_frequency_uncertainty(r, 3);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(s[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("full consensus scores zero") {
    const auto r = make_record({4, 4, 4, 4}, {0, 0, 0, 0});
    for (double s : cluster_frequency_uncertainty(r, 4)) CHECK(s == 0.0);
  }
  SUBCASE("all-distinct clusters score 1 - 1/M") {
    const auto r = make_record({0, 1, 2, 3, 4}, {1, 0, 0, 0, 0});
    for (double s : cluster_frequency_uncertainty(r, 5))
      CHECK(s == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("frequencies use the budget prefix only") {
    const auto r = make_record({0, 0, 1}, {1, 1, 0});
    const auto s = cluster_frequency_uncertainty(r, 2);
    CHECK(s == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("scores stay within [0, 1 - 1/M]") {
    const auto data = generate_dataset({.n_questions = 40, .m_max = 9, .seed = 5});
    for (const auto& r : data.records)
      for (int m : {1, 4, 9})
        for (double s : cluster_frequency_uncertainty(r, m)) {
          CHECK(s >= 0.0);
          CHECK(s <= 1.0 - 1.0 / m);
        }
  }
}

TEST_CASE("precomputed uncertainties take precedence") {
  auto r = make_record({0, 0, 1}, {1, 1, 0});
  SUBCASE("all present on the prefix") {
    r.candidates[0].uncertainty = 0.9;
    r.candidates[1].uncertainty = 0.1;
    CHECK(cluster_frequency_uncertainty(r, 2) == std::vector<double>{0.9, 0.1});
  }
  SUBCASE("partial presence is an error") {
    r.candidates[0].uncertainty = 0.9;
    CHECK_THROWS_AS(cluster_frequency_uncertainty(r, 2), std::invalid_argument);
  }
  SUBCASE("absence beyond the prefix is fine") {
    r.candidates[0].uncertainty = 0.9;
    r.candidates[1].uncertainty = 0.1;
    CHECK_NOTHROW(cluster_frequency_uncertainty(r, 2));
    CHECK_THROWS_AS(cluster_frequency_uncertainty(r, 3), std::invalid_argument);
  }
}

TEST_CASE("ground truth score") {
  SUBCASE("gold cluster frequency complement") {
    const auto r = make_record({0, 0, 1, 2}, {1, 1, 0, 0}, 0);
    CHECK(ground_truth_score(r, 4) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("sampling-failed fallback is maximal") {
    const auto r = make_record({1, 2, 3}, {0, 0, 0});
    CHECK(ground_truth_score(r, 3) == 1.0);
  }
  SUBCASE("explicit gt_uncertainty wins") {
    auto r = make_record({0, 0, 1, 2}, {1, 1, 0, 0}, 0);
    r.gt_uncertainty = 0.37;
    CHECK(ground_truth_score(r, 4) == 0.37);
  }
  SUBCASE("admissible-count fallback without a gold cluster") {
    const auto r = make_record({0, 0, 1, 2}, {1, 1, 0, 0});
    CHECK(ground_truth_score(r, 4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ground_truth_score(r, 2) == 0.0);
  }
}

TEST_CASE("reference score") {
  SUBCASE("minimum over admissible candidates") {
    const auto r = make_record({0, 1, 1}, {0, 1, 1});
    // scores [2/3, 1/3, 1/3]; admissible are the two 1/3 entries
    const auto ref = reference_score(r, 3);
    REQUIRE(ref.has_value());
    CHECK(*ref == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("absent when nothing is admitted") {
    const auto r = make_record({0, 1, 1}, {0, 0, 0});
    CHECK_FALSE(reference_score(r, 3).has_value());
  }
  SUBCASE("single admissible candidate at M=1 scores 0") {
    const auto r = make_record({7}, {1});
    const auto ref = reference_score(r, 1);
    REQUIRE(ref.has_value());
    CHECK(*ref == 0.0);
  }
}

TEST_CASE("reference score lower-bounds admissible scores and satisfies the event equivalence") {
  const auto data = generate_dataset(
      {.n_questions = 80, .m_max = 8, .difficulty_a = 1.0, .difficulty_b = 1.0,
       .noise_clusters = 3, .seed = 17});
  for (const auto& r : data.records) {
    for (int m : {1, 3, 8}) {
      const auto scored = score_record(r, m);
      if (!scored.reference_score) continue;
      for (std::size_t j = 0; j < scored.candidate_scores.size(); ++j)
        if (*r.candidates[j].admission)
          CHECK(*scored.reference_score <= scored.candidate_scores[j]);
      // "some admissible candidate has score <= lambda" iff "reference <= lambda",
      // checked on the grid of all attained scores and their midpoints.
      std::vector<double> lambdas{-0.5, 0.0, 1.0};
      for (double s : scored.candidate_scores) lambdas.push_back(s);
      const std::size_t base = lambdas.size();
      for (std::size_t i = 1; i < base; ++i)
        lambdas.push_back(0.5 * (lambdas[i - 1] + lambdas[i]));
      for (double lambda : lambdas) {
        bool any = false;
        for (std::size_t j = 0; j < scored.candidate_scores.size(); ++j)
          if (*r.candidates[j].admission && scored.candidate_scores[j] <= lambda)
            any = true;
        CHECK(any == (*scored.reference_score <= lambda));
      }
    }
  }
}

TEST_CASE("scoring is deterministic") {
  const auto data = generate_dataset({.n_questions = 10, .m_max = 6, .seed = 23});
  for (const auto& r : data.records) {
    const auto a = score_record(r, 6);
    const auto b = score_record(r, 6);
    CHECK(a.candidate_scores == b.candidate_scores);
    CHECK(a.gt_score == b.gt_score);
    CHECK(a.reference_score == b.reference_score);
  }
}

TEST_CASE("score_record bundles the per-record invariants") {
  const auto r = make_record({0, 1, 0}, {1, 0, 1}, 0);
  const auto s = score_record(r, 3);
  CHECK(s.budget == 3);
  CHECK(s.candidate_scores.size() == 3);
  CHECK(s.gt_score == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(s.reference_score.has_value());
  CHECK(*s.reference_score == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}
