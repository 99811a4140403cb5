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

#ifndef JOINTRANK_JOINT_HPP
#define JOINTRANK_JOINT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jointrank/distance.hpp"
#include "jointrank/linalg.hpp"

namespace jointrank {

inline constexpr int kDefaultGridSize = 100;
inline constexpr int kMinGridSize = 16;
inline constexpr double kDefaultThreshold = 2.0;

// Cases present in both distance vectors, sorted by id, with their paired
// distances.
struct CommonCases {
  std::vector<std::string> case_ids;
  std::vector<double> distances_a;
  std::vector<double> distances_b;
};

// Throws NoCommonCases when the id sets are disjoint.
CommonCases align_common_cases(const DistanceVector& a, const DistanceVector& b);

struct RankVector {
  std::vector<std::string> case_ids;
  std::vector<double> ranks;
};

// Ascending mid-ranks: the smallest value gets rank 1 and tied values share
// the average of their positions. Throws InvalidInput on NaN or infinity.
std::vector<double> mid_ranks(std::span<const double> values);
RankVector rank_distances(std::vector<std::string> case_ids,
                          std::span<const double> distances);

// m / 50 rank units.
double default_bandwidth(std::size_t cases);

/**
 * Gaussian kernel density of the joint rank scatter.
 *
 * density_i = (1/m) sum_j K_h(a_i - a_j, b_i - b_j) with the isotropic kernel
 * K_h(x, y) = exp(-(x^2 + y^2) / (2h^2)) / (2 pi h^2) and no boundary
 * correction. `grid` holds the same estimate at the centers of a G x G
 * partition of [0.5, m + 0.5]^2; grid(i, j) is the cell at the i-th rank_a
 * step and j-th rank_b step. z_score standardizes density by its mean and
 * sample standard deviation; when the density is constant every z is 0.
 */
struct JointRankDensity {
  std::vector<std::string> case_ids;
  std::vector<double> rank_a;
  std::vector<double> rank_b;
  std::vector<double> density;
  std::vector<double> z_score;
  Matrix grid;
  double bandwidth = 0.0;
  int grid_size = 0;
  double density_mean = 0.0;
  double density_sd = 0.0;

  std::size_t cases() const noexcept { return case_ids.size(); }
  // Grid in standard-deviation units of the per-case density.
  Matrix z_scaled_grid() const;
  // Centers of the grid cells along either axis.
  std::vector<double> grid_centers() const;
};

// Throws InvalidInput if m < 2, lengths differ, G < 16 or h <= 0.
JointRankDensity joint_density(std::vector<std::string> case_ids,
                               std::span<const double> ranks_a,
                               std::span<const double> ranks_b,
                               int grid_size = kDefaultGridSize,
                               std::optional<double> bandwidth = std::nullopt);

// Replaces z_score with the elementwise mean over repetitions (all on the
// same case set) and rank_a / rank_b with their means.
JointRankDensity average_repetitions(std::span<const JointRankDensity> runs);

struct DetectOptions {
  double threshold = kDefaultThreshold;
  // Minimum rank fraction q in [0, 1) required on both axes.
  std::optional<double> quadrant_filter;
  // Flag |z| > threshold instead of z > threshold.
  bool two_sided = false;
};

struct FlaggedCase {
  std::string case_id;
  double rank_a = 0.0;
  double rank_b = 0.0;
  double z = 0.0;
};

// Settings echoed into every report.
struct ReportParameters {
  int k_a = 0;
  int k_b = 0;
  double bandwidth = 0.0;
  int grid_size = 0;
  std::uint64_t seed = 0;
  double threshold = kDefaultThreshold;
  std::optional<double> quadrant_filter;
  bool two_sided = false;
};

struct AnomalyReport {
  std::vector<FlaggedCase> flagged;  // z descending (|z| when two-sided)
  double threshold = kDefaultThreshold;
  std::size_t total_cases = 0;
  ReportParameters parameters;
};

AnomalyReport detect_anomalies(const JointRankDensity& jrd,
                               const DetectOptions& options = {});

}  // namespace jointrank

#endif  // JOINTRANK_JOINT_HPP
