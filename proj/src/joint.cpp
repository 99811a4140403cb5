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

#include "jointrank/joint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <utility>

#include "jointrank/error.hpp"

namespace jointrank {

namespace {

// Lookup tables are used when every rank is a multiple of 1/2 and the span
// of doubled ranks stays below this size.
constexpr long long kMaxTableSize = 1LL << 26;
constexpr Index kGridChunk = 8192;

template <class Fn>
void parallel_rows(std::size_t count, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers =
      static_cast<std::size_t>(std::min<std::size_t>(hw, count / 2048 + 1));
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t step = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * step;
    const std::size_t hi = std::min(count, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

bool to_half_steps(std::span<const double> ranks, std::vector<long long>& out) {
  out.resize(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const double twice = 2.0 * ranks[i];
    if (std::abs(twice) > 1e15 || twice != std::nearbyint(twice)) return false;
    out[i] = static_cast<long long>(twice);
  }
  return true;
}

long long span_of(const std::vector<long long>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

std::vector<double> case_densities(std::span<const double> a,
                                   std::span<const double> b, double h) {
  const std::size_t m = a.size();
  const double inv_two_h2 = 1.0 / (2.0 * h * h);
  const double norm = 1.0 / (2.0 * std::numbers::pi * h * h *
                             static_cast<double>(m));
  std::vector<double> density(m);

  std::vector<long long> ia;
  std::vector<long long> ib;
  const bool tabled = to_half_steps(a, ia) && to_half_steps(b, ib) &&
                      std::max(span_of(ia), span_of(ib)) < kMaxTableSize;
  if (tabled) {
    // Differences of half-integer ranks are multiples of 1/2, so the kernel
    // factors exp(-dx^2 / 2h^2) exp(-dy^2 / 2h^2) come from one table.
    const long long size = std::max(span_of(ia), span_of(ib)) + 1;
    std::vector<double> table(static_cast<std::size_t>(size));
    for (long long t = 0; t < size; ++t) {
      const double d = 0.5 * static_cast<double>(t);
      table[static_cast<std::size_t>(t)] = std::exp(-d * d * inv_two_h2);
    }
    parallel_rows(m, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const long long xi = ia[i];
        const long long yi = ib[i];
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          sum += table[static_cast<std::size_t>(std::llabs(xi - ia[j]))] *
                 table[static_cast<std::size_t>(std::llabs(yi - ib[j]))];
        }
        density[i] = sum * norm;
      }
    });
    return density;
  }

  parallel_rows(m, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double dx = a[i] - a[j];
        const double dy = b[i] - b[j];
        sum += std::exp(-(dx * dx + dy * dy) * inv_two_h2);
      }
      density[i] = sum * norm;
    }
  });
  return density;
}

Matrix grid_density(std::span<const double> a, std::span<const double> b,
                    const std::vector<double>& centers, double h) {
  const auto m = static_cast<Index>(a.size());
  const auto g = static_cast<Index>(centers.size());
  const double inv_two_h2 = 1.0 / (2.0 * h * h);
  const double norm = 1.0 / (2.0 * std::numbers::pi * h * h *
                             static_cast<double>(m));
  Matrix grid = Matrix::Zero(g, g);
  for (Index start = 0; start < m; start += kGridChunk) {
    const Index len = std::min(kGridChunk, m - start);
    Matrix ka(g, len);
    Matrix kb(g, len);
    for (Index j = 0; j < len; ++j) {
      for (Index c = 0; c < g; ++c) {
        const double dx = centers[c] - a[start + j];
        const double dy = centers[c] - b[start + j];
        ka(c, j) = std::exp(-dx * dx * inv_two_h2);
        kb(c, j) = std::exp(-dy * dy * inv_two_h2);
      }
    }
    grid.noalias() += ka * kb.transpose();
  }
  return grid * norm;
}

}  // namespace

CommonCases align_common_cases(const DistanceVector& a,
                               const DistanceVector& b) {
  std::unordered_map<std::string, double> lookup;
  lookup.reserve(b.case_ids.size());
  for (std::size_t i = 0; i < b.case_ids.size(); ++i) {
    lookup.emplace(b.case_ids[i], b.distances[i]);
  }
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < a.case_ids.size(); ++i) {
    if (lookup.count(a.case_ids[i]) != 0) hits.push_back(i);
  }
  if (hits.empty()) {
    throw Error(ErrorCode::kNoCommonCases,
                "the partitions share no case ids (" +
                    std::to_string(a.case_ids.size()) + " vs " +
                    std::to_string(b.case_ids.size()) + " cases)");
  }
  std::sort(hits.begin(), hits.end(), [&](std::size_t x, std::size_t y) {
    return a.case_ids[x] < a.case_ids[y];
  });

  CommonCases out;
  for (std::size_t i : hits) {
    if (!out.case_ids.empty() && out.case_ids.back() == a.case_ids[i]) continue;
    out.case_ids.push_back(a.case_ids[i]);
    out.distances_a.push_back(a.distances[i]);
    out.distances_b.push_back(lookup.at(a.case_ids[i]));
  }
  return out;
}

std::vector<double> mid_ranks(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput, "cannot rank NaN or infinity");
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return values[x] < values[y];
  });
  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() && values[order[stop]] == values[order[start]]) {
      ++stop;
    }
    // Positions start..stop-1 hold 1-based ranks start+1..stop.
    const double rank = 0.5 * static_cast<double>(start + 1 + stop);
    for (std::size_t p = start; p < stop; ++p) ranks[order[p]] = rank;
    start = stop;
  }
  return ranks;
}

RankVector rank_distances(std::vector<std::string> case_ids,
                          std::span<const double> distances) {
  if (case_ids.size() != distances.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "case id count does not match distance count");
  }
  return RankVector{std::move(case_ids), mid_ranks(distances)};
}

double default_bandwidth(std::size_t cases) {
  return static_cast<double>(cases) / 50.0;
}

Matrix JointRankDensity::z_scaled_grid() const {
  if (!(density_sd > 0.0)) return Matrix::Zero(grid.rows(), grid.cols());
  return (grid.array() - density_mean) / density_sd;
}

std::vector<double> JointRankDensity::grid_centers() const {
  const double m = static_cast<double>(cases());
  const double width = m / grid_size;
  std::vector<double> centers(static_cast<std::size_t>(grid_size));
  for (int c = 0; c < grid_size; ++c) centers[c] = 0.5 + (c + 0.5) * width;
  return centers;
}

JointRankDensity joint_density(std::vector<std::string> case_ids,
                               std::span<const double> ranks_a,
                               std::span<const double> ranks_b, int grid_size,
                               std::optional<double> bandwidth) {
  const std::size_t m = ranks_a.size();
  if (m < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "joint density needs at least 2 cases");
  }
  if (ranks_b.size() != m || case_ids.size() != m) {
    throw Error(ErrorCode::kInvalidInput,
                "rank vectors and case ids differ in length");
  }
  if (grid_size < kMinGridSize) {
    throw Error(ErrorCode::kInvalidInput,
                "grid size must be at least " + std::to_string(kMinGridSize));
  }
  const double h = bandwidth.value_or(default_bandwidth(m));
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidInput, "bandwidth must be positive");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(ranks_a[i]) || !std::isfinite(ranks_b[i])) {
      throw Error(ErrorCode::kInvalidInput, "ranks must be finite");
    }
  }

  JointRankDensity out;
  out.case_ids = std::move(case_ids);
  out.rank_a.assign(ranks_a.begin(), ranks_a.end());
  out.rank_b.assign(ranks_b.begin(), ranks_b.end());
  out.bandwidth = h;
  out.grid_size = grid_size;
  out.density = case_densities(ranks_a, ranks_b, h);

  const double n = static_cast<double>(m);
  const double mean =
      std::accumulate(out.density.begin(), out.density.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : out.density) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  out.density_mean = mean;
  out.z_score.assign(m, 0.0);
  if (sd > 1e-12 * std::abs(mean)) {
    out.density_sd = sd;
    for (std::size_t i = 0; i < m; ++i) {
      out.z_score[i] = (out.density[i] - mean) / sd;
    }
  }

  out.grid = grid_density(ranks_a, ranks_b, out.grid_centers(), h);
  return out;
}

JointRankDensity average_repetitions(std::span<const JointRankDensity> runs) {
  if (runs.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no repetitions to average");
  }
  JointRankDensity out = runs.front();
  const std::size_t m = out.cases();
  for (std::size_t r = 1; r < runs.size(); ++r) {
    const auto& run = runs[r];
    if (run.case_ids != out.case_ids) {
      throw Error(ErrorCode::kInvalidInput,
                  "repetitions cover different case sets");
    }
    for (std::size_t i = 0; i < m; ++i) {
      out.z_score[i] += run.z_score[i];
      out.rank_a[i] += run.rank_a[i];
      out.rank_b[i] += run.rank_b[i];
      out.density[i] += run.density[i];
    }
    out.grid += run.grid;
  }
  const double count = static_cast<double>(runs.size());
  for (std::size_t i = 0; i < m; ++i) {
    out.z_score[i] /= count;
    out.rank_a[i] /= count;
    out.rank_b[i] /= count;
    out.density[i] /= count;
  }
  out.grid /= count;
  return out;
}

AnomalyReport detect_anomalies(const JointRankDensity& jrd,
                               const DetectOptions& options) {
  if (!std::isfinite(options.threshold)) {
    throw Error(ErrorCode::kInvalidInput, "threshold must be finite");
  }
  if (options.quadrant_filter &&
      !(*options.quadrant_filter >= 0.0 && *options.quadrant_filter < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "quadrant filter must be in [0, 1)");
  }

  AnomalyReport report;
  report.threshold = options.threshold;
  report.total_cases = jrd.cases();
  report.parameters.bandwidth = jrd.bandwidth;
  report.parameters.grid_size = jrd.grid_size;
  report.parameters.threshold = options.threshold;
  report.parameters.quadrant_filter = options.quadrant_filter;
  report.parameters.two_sided = options.two_sided;

  const double m = static_cast<double>(jrd.cases());
  for (std::size_t i = 0; i < jrd.cases(); ++i) {
    const double z = jrd.z_score[i];
    const bool extreme =
        options.two_sided ? std::abs(z) > options.threshold : z > options.threshold;
    if (!extreme) continue;
    if (options.quadrant_filter) {
      const double q = *options.quadrant_filter;
      if (jrd.rank_a[i] / m < q || jrd.rank_b[i] / m < q) continue;
    }
    report.flagged.push_back({jrd.case_ids[i], jrd.rank_a[i], jrd.rank_b[i], z});
  }

  const bool two_sided = options.two_sided;
  std::sort(report.flagged.begin(), report.flagged.end(),
            [two_sided](const FlaggedCase& x, const FlaggedCase& y) {
              const double kx = two_sided ? std::abs(x.z) : x.z;
              const double ky = two_sided ? std::abs(y.z) : y.z;
              if (kx != ky) return kx > ky;
              return x.case_id < y.case_id;
            });
  return report;
}

}  // namespace jointrank
