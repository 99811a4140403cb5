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

#ifndef JOINTRANK_LINALG_HPP
#define JOINTRANK_LINALG_HPP

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

/**
 * @file linalg.hpp
 * @brief Dense matrices, thin SVD, and the correspondence-analysis target
 * matrix computed by three interchangeable diagonal-scaling strategies.
 */

namespace jointrank {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Throws InvalidInput naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& a, std::string_view what);

/**
 * Non-negative weights summing to one, e.g. the row or column masses of a
 * correspondence matrix. Construction validates the invariant.
 */
class MarginVector {
 public:
  // Throws InvalidInput on a negative or non-finite entry, or a sum that is
  // not 1 within 1e-12.
  static MarginVector from_values(Vector values);
  static MarginVector uniform(Index size);

  const Vector& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  double operator[](Index i) const { return values_[i]; }

 private:
  explicit MarginVector(Vector values) : values_(std::move(values)) {}
  Vector values_;
};

struct Margins {
  MarginVector rows;
  MarginVector cols;
};

// P = N / n. Throws InvalidInput on negative entries or a zero grand total.
Matrix correspondence_matrix(const Matrix& counts);

// Row and column sums of a correspondence matrix.
Margins correspondence_margins(const Matrix& p);

/**
 * Thin SVD A = U diag(sigma) V^T with q = min(rows, cols).
 *
 * Singular values are non-increasing; values below 1e-12 * sigma_max are set
 * to exactly zero. Each column of U is oriented so that its largest-magnitude
 * entry is non-negative (the first such entry on ties), and V follows.
 */
struct SvdResult {
  Matrix u;
  Vector singular_values;
  Matrix v;
};

SvdResult svd(const Matrix& a);

enum class ScalingStrategy { kFullDiagonal, kSparseDiagonal, kVectorized };

std::string_view to_string(ScalingStrategy strategy);

// Bytes of temporary storage a scaling kernel allocated beyond its output.
struct ScratchUsage {
  std::size_t bytes = 0;
};

/**
 * Standardized residuals T = D_r^{-1/2} (P - r c^T) D_c^{-1/2}.
 *
 * All three strategies compute the same matrix. The full-diagonal strategy
 * materializes both diagonal matrices densely (Theta(m^2 + p^2) scratch), the
 * sparse one stores them as CSR matrices, and the vectorized one scales
 * columns in place without forming any diagonal matrix.
 *
 * Throws ZeroMargin (index = offending row, or rows + column) when a margin
 * is zero and InvalidInput on mismatched shapes or non-finite entries.
 */
Matrix ca_target_full_diagonal(const Matrix& p, const MarginVector& r,
                               const MarginVector& c,
                               ScratchUsage* scratch = nullptr);
Matrix ca_target_sparse_diagonal(const Matrix& p, const MarginVector& r,
                                 const MarginVector& c,
                                 ScratchUsage* scratch = nullptr);
Matrix ca_target_vectorized(const Matrix& p, const MarginVector& r,
                            const MarginVector& c,
                            ScratchUsage* scratch = nullptr);
Matrix ca_target(const Matrix& p, const MarginVector& r, const MarginVector& c,
                 ScalingStrategy strategy, ScratchUsage* scratch = nullptr);

/**
 * Row principal coordinates F = D_q^{-1/2} U diag(sigma), i.e.
 * F(i, j) = U(i, j) * sigma_j / sqrt(row_scale_i). The strategy selects how
 * D_q^{-1/2} and diag(sigma) are applied, mirroring `ca_target`.
 */
Matrix principal_coordinates(
    const SvdResult& svd, const MarginVector& row_scale,
    ScalingStrategy strategy = ScalingStrategy::kVectorized,
    ScratchUsage* scratch = nullptr);

}  // namespace jointrank

#endif  // JOINTRANK_LINALG_HPP
