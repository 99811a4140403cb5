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
#include <numeric>

#include "gtest/gtest.h"
#include "jointrank/error.hpp"
#include "oracles.hpp"

namespace jointrank {
namespace {

using testing::Gen;
using testing::thrown_code;

std::vector<double> random_with_ties(Gen& gen, std::size_t n) {
  std::vector<double> v(n);
  const long levels = gen.integer(1, static_cast<long>(n) + 1);
  for (double& x : v) x = static_cast<double>(gen.integer(0, levels)) * 0.25;
  return v;
}

TEST(MidRanks, TiesShareTheAverage) {
  EXPECT_EQ(mid_ranks(std::vector<double>{2.0, 2.0}), (std::vector<double>{1.5, 1.5}));
  EXPECT_EQ(mid_ranks(std::vector<double>{0.3, 0.1, 0.2}),
            (std::vector<double>{3.0, 1.0, 2.0}));
  EXPECT_EQ(mid_ranks(std::vector<double>{5.0, 1.0, 5.0, 5.0}),
            (std::vector<double>{3.0, 1.0, 3.0, 3.0}));
  EXPECT_TRUE(mid_ranks(std::vector<double>{}).empty());
  EXPECT_EQ(thrown_code([] { mid_ranks(std::vector<double>{1.0, std::nan("")}); }),
            ErrorCode::kInvalidInput);
}

TEST(MidRanks, PropertyMatchesPairwiseOracleAndSum) {
  Gen gen(51);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 200));
    const auto v = trial % 2 == 0 ? random_with_ties(gen, n) : [&] {
      std::vector<double> u(n);
      for (double& x : u) x = gen.normal();
      return u;
    }();
    const auto r = mid_ranks(v);
    EXPECT_EQ(r, testing::pairwise_ranks(v));
    const double m = static_cast<double>(n);
    EXPECT_NEAR(std::accumulate(r.begin(), r.end(), 0.0), m * (m + 1) / 2, 1e-9);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(r[i], 1.0);
      EXPECT_LE(r[i], m);
      for (std::size_t j = 0; j < n; ++j) {
        if (v[i] < v[j]) {
          EXPECT_LT(r[i], r[j]);
        }
      }
    }
  }
}

TEST(RankDistances, PropertyInvariantUnderMonotoneTransforms) {
  Gen gen(52);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 300));
    std::vector<double> d = random_with_ties(gen, n);
    const auto ids = testing::numbered_ids(n);
    const RankVector base = rank_distances(ids, d);
    const double scale = gen.uniform(0.01, 100.0);
    std::vector<double> t(n);
    std::transform(d.begin(), d.end(), t.begin(),
                   [&](double x) { return std::log1p(scale * x) + x * x * x; });
    EXPECT_EQ(rank_distances(ids, t).ranks, base.ranks);
    EXPECT_EQ(base.case_ids, ids);
  }
  EXPECT_EQ(thrown_code([] { rank_distances({"a"}, std::vector<double>{1.0, 2.0}); }),
            ErrorCode::kInvalidInput);
}

TEST(AlignCommonCases, SortedIntersection) {
  const DistanceVector a{{"c", "a", "b"}, {3.0, 1.0, 2.0}, 1};
  const DistanceVector b{{"b", "d", "c"}, {20.0, 40.0, 30.0}, 1};
  const CommonCases common = align_common_cases(a, b);
  EXPECT_EQ(common.case_ids, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(common.distances_a, (std::vector<double>{2.0, 3.0}));
  EXPECT_EQ(common.distances_b, (std::vector<double>{20.0, 30.0}));
  const DistanceVector none{{"x"}, {1.0}, 1};
  EXPECT_EQ(thrown_code([&] { align_common_cases(a, none); }), ErrorCode::kNoCommonCases);
}

TEST(JointDensity, DefaultsAndCenters) {
  EXPECT_DOUBLE_EQ(default_bandwidth(1000), 20.0);
  const std::vector<double> r = {1, 2, 3, 4};
  const JointRankDensity j = joint_density(testing::numbered_ids(4), r, r, 16);
  EXPECT_DOUBLE_EQ(j.bandwidth, 4.0 / 50.0);
  EXPECT_EQ(j.grid.rows(), 16);
  EXPECT_EQ(j.grid.cols(), 16);
  const auto centers = j.grid_centers();
  EXPECT_DOUBLE_EQ(centers.front(), 0.5 + 0.125);
  EXPECT_DOUBLE_EQ(centers.back(), 4.5 - 0.125);
}

TEST(JointDensity, RejectsBadArguments) {
  const std::vector<double> r = {1, 2, 3};
  const auto ids = testing::numbered_ids(3);
  EXPECT_EQ(thrown_code([&] { joint_density({"a"}, std::vector<double>{1}, std::vector<double>{1}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(thrown_code([&] { joint_density(ids, r, std::vector<double>{1, 2}); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(thrown_code([&] { joint_density(ids, r, r, 15); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(thrown_code([&] { joint_density(ids, r, r, 16, 0.0); }), ErrorCode::kInvalidInput);
  const std::vector<double> bad = {1, INFINITY, 3};
  EXPECT_EQ(thrown_code([&] { joint_density(ids, r, bad); }), ErrorCode::kInvalidInput);
}

TEST(JointDensity, MatchesDirectEvaluationAtCasesAndGrid) {
  Gen gen(53);
  for (const std::size_t m : {30u, 120u}) {
    std::vector<double> a(m);
    std::vector<double> b(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = gen.uniform(1.0, static_cast<double>(m));
      b[i] = gen.uniform(1.0, static_cast<double>(m));
    }
    // Non-half-integer ranks exercise the direct path; mid-ranks the table.
    for (int pass = 0; pass < 2; ++pass) {
      if (pass == 1) {
        a = mid_ranks(a);
        b = mid_ranks(random_with_ties(gen, m));
      }
      const double h = gen.uniform(0.5, 10.0);
      const JointRankDensity j = joint_density(testing::numbered_ids(m), a, b, 20, h);
      for (std::size_t i = 0; i < m; ++i) {
        const double expected = testing::direct_kde(a, b, h, a[i], b[i]);
        EXPECT_NEAR(j.density[i], expected, 1e-12 * expected);
      }
      const auto centers = j.grid_centers();
      for (int r = 0; r < 20; ++r) {
        for (int c = 0; c < 20; ++c) {
          const double expected = testing::direct_kde(a, b, h, centers[r], centers[c]);
          EXPECT_NEAR(j.grid(r, c), expected, 1e-12 * expected + 1e-300);
        }
      }
    }
  }
}

TEST(JointDensity, PropertyZScoresAreStandardized) {
  Gen gen(54);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = static_cast<std::size_t>(gen.integer(3, 250));
    const auto a = mid_ranks(random_with_ties(gen, m));
    std::vector<double> noise(m);
    for (double& x : noise) x = gen.normal();
    const auto b = mid_ranks(noise);
    const JointRankDensity j = joint_density(testing::numbered_ids(m), a, b,
                                             kMinGridSize, gen.uniform(0.5, 20.0));
    for (double d : j.density) EXPECT_GE(d, 0.0);
    if (j.density_sd > 0.0) {
      EXPECT_NEAR(testing::mean_of(j.z_score), 0.0, 1e-9);
      EXPECT_NEAR(testing::sample_sd(j.z_score), 1.0, 1e-9);
    }
  }
}

TEST(JointDensity, SingleAtomIsDegenerate) {
  const std::vector<double> r(50, 25.5);
  const JointRankDensity j = joint_density(testing::numbered_ids(50), r, r);
  for (double z : j.z_score) EXPECT_EQ(z, 0.0);
  EXPECT_EQ(j.density_sd, 0.0);
  EXPECT_EQ(j.z_scaled_grid().cwiseAbs().maxCoeff(), 0.0);
}

TEST(JointDensity, SymmetricClustersShareZ) {
  std::vector<double> a;
  std::vector<double> b;
  for (int i = 0; i < 10; ++i) {
    a.push_back(1.0 + 0.1 * i);
    b.push_back(1.0 + 0.2 * i);
  }
  for (int i = 0; i < 10; ++i) {
    a.push_back(1001.0 - 0.1 * i);
    b.push_back(1001.0 - 0.2 * i);
  }
  const JointRankDensity j = joint_density(testing::numbered_ids(20), a, b, 16, 2.0);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(j.z_score[i], j.z_score[i + 10], 1e-9);
}

JointRankDensity with_z(std::vector<double> z) {
  JointRankDensity j;
  const std::size_t m = z.size();
  j.case_ids = testing::numbered_ids(m);
  for (std::size_t i = 0; i < m; ++i) {
    j.rank_a.push_back(static_cast<double>(i + 1));
    j.rank_b.push_back(static_cast<double>(m - i));
  }
  j.density.assign(m, 1.0);
  j.z_score = std::move(z);
  j.grid = Matrix::Zero(kMinGridSize, kMinGridSize);
  j.grid_size = kMinGridSize;
  j.bandwidth = 1.0;
  return j;
}

DetectOptions options(double threshold, std::optional<double> quadrant = std::nullopt,
                      bool two_sided = false) {
  DetectOptions o;
  o.threshold = threshold;
  o.quadrant_filter = quadrant;
  o.two_sided = two_sided;
  return o;
}

TEST(DetectAnomalies, ThresholdExamples) {
  AnomalyReport r = detect_anomalies(with_z({0.0, 3.0, 1.0}), options(2.0));
  ASSERT_EQ(r.flagged.size(), 1u);
  EXPECT_EQ(r.flagged[0].case_id, testing::numbered_ids(3)[1]);
  EXPECT_EQ(r.flagged[0].z, 3.0);
  EXPECT_EQ(r.total_cases, 3u);
  EXPECT_TRUE(detect_anomalies(with_z({0.0, 1.0, 1.5}), options(2.0)).flagged.empty());
  EXPECT_TRUE(detect_anomalies(with_z({2.0}), options(2.0)).flagged.empty());
  EXPECT_EQ(thrown_code([] { detect_anomalies(with_z({1.0}), options(NAN)); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(thrown_code([] { detect_anomalies(with_z({1.0}), options(2.0, 1.0)); }),
            ErrorCode::kInvalidInput);
}

TEST(DetectAnomalies, SortingTwoSidedAndQuadrant) {
  const auto j = with_z({2.5, -4.0, 5.0, 2.5, 0.0});
  const AnomalyReport one = detect_anomalies(j, options(2.0));
  ASSERT_EQ(one.flagged.size(), 3u);
  EXPECT_EQ(one.flagged[0].z, 5.0);
  EXPECT_EQ(one.flagged[1].case_id, j.case_ids[0]);
  EXPECT_EQ(one.flagged[2].case_id, j.case_ids[3]);

  const AnomalyReport two = detect_anomalies(j, options(2.0, std::nullopt, true));
  ASSERT_EQ(two.flagged.size(), 4u);
  EXPECT_EQ(two.flagged[1].z, -4.0);

  // rank_a = i + 1, rank_b = 5 - i; only i = 2 has both fractions >= 0.6.
  const AnomalyReport quad = detect_anomalies(j, options(2.0, 0.6));
  ASSERT_EQ(quad.flagged.size(), 1u);
  EXPECT_EQ(quad.flagged[0].case_id, j.case_ids[2]);
}

TEST(DetectAnomalies, PropertyFlaggedCountNonIncreasingInThreshold) {
  Gen gen(55);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> z(static_cast<std::size_t>(gen.integer(1, 200)));
    for (double& x : z) x = gen.normal() * 2.0;
    const auto j = with_z(z);
    std::size_t previous = z.size() + 1;
    for (double t = -5.0; t <= 5.0; t += 0.25) {
      const AnomalyReport r = detect_anomalies(j, options(t));
      EXPECT_LE(r.flagged.size(), previous);
      previous = r.flagged.size();
      for (const auto& f : r.flagged) EXPECT_GT(f.z, t);
      for (std::size_t k = 1; k < r.flagged.size(); ++k) {
        EXPECT_GE(r.flagged[k - 1].z, r.flagged[k].z);
      }
    }
  }
}

TEST(AverageRepetitions, MeanOfRuns) {
  auto a = with_z({1.0, -1.0});
  auto b = with_z({3.0, 1.0});
  b.grid.setOnes();
  const std::vector<JointRankDensity> runs = {a, b};
  const JointRankDensity avg = average_repetitions(runs);
  EXPECT_EQ(avg.z_score, (std::vector<double>{2.0, 0.0}));
  EXPECT_DOUBLE_EQ(avg.grid(3, 4), 0.5);
  b.case_ids[0] = "other";
  const std::vector<JointRankDensity> mixed = {a, b};
  EXPECT_EQ(thrown_code([&] { average_repetitions(mixed); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(thrown_code([] { average_repetitions({}); }), ErrorCode::kInvalidInput);
}

}  // namespace
}  // namespace jointrank
