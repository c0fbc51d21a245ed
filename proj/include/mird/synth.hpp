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
#include <cstdint>

#include "mird/records.hpp"

namespace mird {

/// Generative model with a closed-form failure oracle: per question a
/// difficulty p ~ Beta(a, b), then m_max i.i.d. candidates, each admissible
/// (cluster 0) with probability p, else an inadmissible candidate with a
/// cluster id uniform on {1..noise_clusters}.
struct SynthParams {
  std::size_t n_questions = 0;
  int m_max = 0;
  double difficulty_a = 1.0;
  double difficulty_b = 1.0;
  int noise_clusters = 1;
  std::uint64_t seed = 0;
};

/// Deterministic in `seed`; candidates are stored in draw order so prefixes
/// realize smaller budgets. gt_cluster is 0 on every record.
Dataset generate_dataset(const SynthParams& params);

/// Exact P(no admissible candidate among the first `budget` draws)
/// = E[(1-p)^budget] = prod_{j=0}^{budget-1} (b + j) / (a + b + j).
double oracle_pfail(const SynthParams& params, int budget);

}  // namespace mird
