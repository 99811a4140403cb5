/*
 * Copyright 2026 The jointrank Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef JOINTRANK_DISTANCE_HPP
#define JOINTRANK_DISTANCE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jointrank/linalg.hpp"
#include "jointrank/ordination.hpp"

namespace jointrank {

// Per-case Euclidean distance from the origin over the first `k_used`
// principal coordinates.
struct DistanceVector {
  std::vector<std::string> case_ids;
  std::vector<double> distances;
  int k_used = 0;
};

// Number of eigenvalues strictly greater than 1, or 1 if there are none.
// Throws InvalidInput on empty input.
int kaiser_guttman_k(std::span<const double> eigenvalues);

/**
 * How many components to keep.
 *
 * kKaiser applies `kaiser_guttman_k` to `kaiser_scale(ord)`; kFixed keeps
 * `fixed_k`; kVarianceFraction keeps the smallest k whose cumulative variance
 * fraction reaches `variance_target`.
 */
struct StoppingRule {
  enum class Kind { kKaiser, kFixed, kVarianceFraction };
  Kind kind = Kind::kKaiser;
  int fixed_k = 1;
  double variance_target = 0.9;

  // "kaiser", an integer such as "3", or "var:0.85".
  static StoppingRule parse(const std::string& text);
  std::string to_string() const;
};

// Eigenvalues on the scale the Kaiser-Guttman ">1" test expects. PCA
// eigenvalues (correlation scale, mean 1) are returned as is. CA principal
// inertias never exceed 1, so they are divided by their mean over the
// min(m, p) - 1 non-trivial dimensions.
std::vector<double> kaiser_scale(const Ordination& ord);

// Throws InvalidInput when a fixed k exceeds the available components.
int select_components(const Ordination& ord, const StoppingRule& rule);

// d_i = sqrt(sum_{j<k} F(i, j)^2). Throws InvalidInput unless
// 1 <= k <= F.cols() and case_ids matches F's rows.
DistanceVector ordinal_distances(const Matrix& f, int k,
                                 std::vector<std::string> case_ids);
DistanceVector ordinal_distances(const Ordination& ord, int k);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<std::size_t> counts;
};

// Equal-width bins over [min, max]; the last bin is closed on the right.
Histogram histogram(std::span<const double> values, int bins);

}  // namespace jointrank

#endif  // JOINTRANK_DISTANCE_HPP
