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

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

namespace mird {

/// Pairwise (cascade) summation: a fixed association order, so aggregates
/// do not depend on which worker produced which addend.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double mean(std::span<const double> xs) {
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

/// Sample standard deviation / sqrt(n); absent for fewer than two values.
std::optional<double> standard_error(std::span<const double> xs);

/// ceil(x) with values within 1e-9 of an integer treated as that integer,
/// matching exact rational arithmetic on percent-grid inputs.
inline double guarded_ceil(double x) {
  const double r = std::nearbyint(x);
  if (std::fabs(x - r) < 1e-9) return r;
  return std::ceil(x);
}

}  // namespace mird
