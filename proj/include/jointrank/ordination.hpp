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

#ifndef JOINTRANK_ORDINATION_HPP
#define JOINTRANK_ORDINATION_HPP

#include <string>
#include <string_view>
#include <vector>

#include "jointrank/coding.hpp"
#include "jointrank/linalg.hpp"

namespace jointrank {

enum class OrdinationMethod { kCA, kPCA };

std::string_view to_string(OrdinationMethod method);

/**
 * SVD-based ordination of a cases-by-variables matrix.
 *
 * `f` holds row principal coordinates (cases x q) and `v` the contribution
 * coordinates of the variables (variables x q, the right singular vectors).
 * `eigenvalues` are the squared singular values and `variance_fraction` their
 * share of the total. When the total is zero (no structure at all) every
 * fraction is zero.
 */
struct Ordination {
  OrdinationMethod method = OrdinationMethod::kCA;
  Matrix f;
  Matrix v;
  Vector singular_values;
  Vector eigenvalues;
  Vector variance_fraction;
  std::vector<std::string> case_ids;
  std::vector<std::string> variable_names;

  Index components() const noexcept { return singular_values.size(); }
};

/**
 * Correspondence analysis. P = N/n, T = D_r^{-1/2}(P - rc^T)D_c^{-1/2},
 * F = D_r^{-1/2} U Gamma. Needs at least 2 rows and 2 columns of
 * non-negative entries with no all-zero row or column.
 */
Ordination ordinate_ca(const CodedMatrix& coded,
                       ScalingStrategy strategy = ScalingStrategy::kVectorized);

/**
 * PCA on the correlation scale: each column is centered and divided by its
 * population standard deviation, T = Z / sqrt(m). The eigenvalues are then
 * exactly those of the correlation matrix (they sum to the column count) and
 * F = sqrt(m) U Gamma = Z V. Throws ConstantColumn for a zero-variance column.
 */
Ordination ordinate_pca(const CodedMatrix& coded);

struct ScreeEntry {
  int component = 0;  // 1-based
  double eigenvalue = 0.0;
  double cumulative_fraction = 0.0;
};

std::vector<ScreeEntry> scree(const Ordination& ord);

}  // namespace jointrank

#endif  // JOINTRANK_ORDINATION_HPP
