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

#include "jointrank/bench.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <ostream>
#include <random>

#include "jointrank/csv_io.hpp"
#include "jointrank/error.hpp"
#include "random_util.hpp"

namespace jointrank {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  return (a - b).cwiseAbs().maxCoeff();
}

std::size_t full_diagonal_bytes(std::size_t m, std::size_t p) {
  return sizeof(double) * (m * m + p * p + 2 * m * p);
}

}  // namespace

void BenchConfig::validate() const {
  if (sizes.empty()) throw Error(ErrorCode::kConfigError, "no sizes given");
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw Error(ErrorCode::kConfigError, "sizes must be ascending");
  }
  if (sizes.front() < 2 || cols < 2) {
    throw Error(ErrorCode::kConfigError, "need at least 2 rows and 2 columns");
  }
  if (repeats < 3) throw Error(ErrorCode::kConfigError, "repeats must be >= 3");
}

Matrix random_count_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix n(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      n(i, j) = static_cast<double>(internal::uniform_below(rng, 10));
    }
  }
  for (Index i = 0; i < rows; ++i) {
    if (n.row(i).sum() == 0.0) n(i, i % cols) = 1.0;
  }
  for (Index j = 0; j < cols; ++j) {
    if (n.col(j).sum() == 0.0) n(j % rows, j) = 1.0;
  }
  return n;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<BenchResult> bench(const BenchConfig& config) {
  config.validate();
  std::vector<BenchResult> results;
  const ScalingStrategy strategies[] = {ScalingStrategy::kFullDiagonal,
                                        ScalingStrategy::kSparseDiagonal,
                                        ScalingStrategy::kVectorized};
  for (std::size_t size_index = 0; size_index < config.sizes.size(); ++size_index) {
    const auto m = static_cast<Index>(config.sizes[size_index]);
    const auto p = static_cast<Index>(config.cols);
    const Matrix counts =
        random_count_matrix(m, p, internal::mix_seed(config.seed, size_index));
    const Matrix pm = correspondence_matrix(counts);
    const Margins margins = correspondence_margins(pm);

    const Matrix t_ref = ca_target_vectorized(pm, margins.rows, margins.cols);
    const SvdResult svd_ref = svd(t_ref);
    const Matrix f_ref = principal_coordinates(svd_ref, margins.rows);

    for (ScalingStrategy strategy : strategies) {
      BenchResult r;
      r.strategy = strategy;
      r.rows = config.sizes[size_index];
      r.cols = config.cols;
      if (strategy == ScalingStrategy::kFullDiagonal &&
          full_diagonal_bytes(r.rows, r.cols) > config.memory_cap_bytes) {
        r.skipped = true;
        r.skip_reason = "memory";
        r.scratch_bytes = full_diagonal_bytes(r.rows, r.cols);
        results.push_back(std::move(r));
        continue;
      }
      for (int rep = 0; rep < config.repeats; ++rep) {
        ScratchUsage target_scratch;
        ScratchUsage coord_scratch;
        const auto start = Clock::now();
        const Matrix t = ca_target(pm, margins.rows, margins.cols, strategy,
                                   &target_scratch);
        const double target_time = seconds_since(start);
        const SvdResult decomposition = svd(t);
        const auto coord_start = Clock::now();
        const Matrix f = principal_coordinates(decomposition, margins.rows,
                                               strategy, &coord_scratch);
        const double coord_time = seconds_since(coord_start);
        r.seconds.push_back(seconds_since(start));
        r.normalization_seconds.push_back(target_time + coord_time);
        r.scratch_bytes = std::max(
            {r.scratch_bytes, target_scratch.bytes, coord_scratch.bytes});
        r.residual = std::max(
            {r.residual, max_abs_diff(t, t_ref), max_abs_diff(f, f_ref)});
      }
      if (!(r.residual <= kBenchResidualTolerance)) {
        throw Error(ErrorCode::kNumericalFailure,
                    std::string(to_string(strategy)) + " strategy deviates by " +
                        format_double(r.residual) + " at " +
                        std::to_string(r.rows) + " rows");
      }
      r.median_seconds = median(r.seconds);
      r.median_normalization_seconds = median(r.normalization_seconds);
      results.push_back(std::move(r));
    }
  }
  return results;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchResult>& results) {
  out << "strategy,rows,cols,status,median_seconds,median_normalization_seconds,"
         "runs,scratch_bytes,residual\n";
  for (const auto& r : results) {
    out << to_string(r.strategy) << ',' << r.rows << ',' << r.cols << ',';
    if (r.skipped) {
      out << "skipped(" << r.skip_reason << "),,,0," << r.scratch_bytes << ",\n";
      continue;
    }
    out << "ok," << format_double(r.median_seconds) << ','
        << format_double(r.median_normalization_seconds) << ','
        << r.seconds.size() << ',' << r.scratch_bytes << ','
        << format_double(r.residual) << '\n';
  }
}

}  // namespace jointrank
