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

#ifndef JOINTRANK_BENCH_HPP
#define JOINTRANK_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jointrank/linalg.hpp"

namespace jointrank {

struct BenchConfig {
  std::vector<std::size_t> sizes;  // ascending row counts
  std::size_t cols = 100;
  int repeats = 3;
  std::uint64_t seed = 1;
  // Full-diagonal runs whose dense diagonals would exceed this are skipped.
  std::size_t memory_cap_bytes = std::size_t{2} << 30;

  // Throws ConfigError.
  void validate() const;
};

/**
 * One strategy at one size. A run is the whole CA listing: target matrix,
 * SVD and principal coordinates. `normalization_seconds` times the two
 * scaling steps alone. `residual` is the largest elementwise difference of T
 * and F against the vectorized strategy over all runs.
 */
struct BenchResult {
  ScalingStrategy strategy = ScalingStrategy::kVectorized;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> seconds;
  std::vector<double> normalization_seconds;
  double median_seconds = 0.0;
  double median_normalization_seconds = 0.0;
  std::size_t scratch_bytes = 0;
  double residual = 0.0;
  bool skipped = false;
  std::string skip_reason;
};

inline constexpr double kBenchResidualTolerance = 1e-10;

// Seeded counts in 0..9 with no all-zero row or column.
Matrix random_count_matrix(Index rows, Index cols, std::uint64_t seed);

// Throws NumericalFailure if any run's residual exceeds 1e-10.
std::vector<BenchResult> bench(const BenchConfig& config);

double median(std::vector<double> values);

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& results);

}  // namespace jointrank

#endif  // JOINTRANK_BENCH_HPP
