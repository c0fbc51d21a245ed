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

#include "mird/synth.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "mird/rng.hpp"

namespace mird {

namespace {

void check_params(const SynthParams& p) {
  if (p.n_questions < 1) throw std::invalid_argument("n_questions must be positive");
  if (p.m_max < 1) throw std::invalid_argument("m_max must be positive");
  if (!(p.difficulty_a > 0.0) || !(p.difficulty_b > 0.0))
    throw std::invalid_argument("difficulty shape parameters must be positive");
  if (p.noise_clusters < 1)
    throw std::invalid_argument("noise_clusters must be positive");
}

double draw_beta(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  for (;;) {
    const double x = ga(rng);
    const double y = gb(rng);
    if (x + y > 0.0) return x / (x + y);
  }
}

std::string question_id(std::size_t index, int width) {
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < width)
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return "q" + digits;
}

}  // namespace

Dataset generate_dataset(const SynthParams& params) {
  check_params(params);
  int width = 1;
  for (std::size_t v = params.n_questions - 1; v >= 10; v /= 10) ++width;
  width = std::max(width, 6);

  std::vector<QuestionRecord> records;
  records.reserve(params.n_questions);
  for (std::size_t q = 0; q < params.n_questions; ++q) {
    std::mt19937_64 rng(mix_seed(params.seed, q));
    const double p = draw_beta(rng, params.difficulty_a, params.difficulty_b);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    QuestionRecord r;
    r.id = question_id(q, width);
    r.gt_cluster = 0;
    r.candidates.reserve(static_cast<std::size_t>(params.m_max));
    for (int m = 0; m < params.m_max; ++m) {
      Candidate c;
      if (unit(rng) < p) {
        c.cluster_id = 0;
        c.admission = true;
      } else {
        c.cluster_id =
            1 + static_cast<int>(bounded_rand(rng, static_cast<std::uint64_t>(
                                                       params.noise_clusters)));
        c.admission = false;
      }
      r.candidates.push_back(c);
    }
    records.push_back(std::move(r));
  }
  return make_dataset(std::move(records));
}

double oracle_pfail(const SynthParams& params, int budget) {
  check_params(params);
  if (budget < 1) throw std::invalid_argument("budget must be positive");
  double prod = 1.0;
  for (int j = 0; j < budget; ++j)
    prod *= (params.difficulty_b + j) / (params.difficulty_a + params.difficulty_b + j);
  return prod;
}

}  // namespace mird
