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

#include <sstream>

#include "gtest/gtest.h"
#include "jointrank/error.hpp"
#include "oracles.hpp"

namespace jointrank {
namespace {

using testing::thrown_code;

TEST(Bench, ConfigValidation) {
  BenchConfig c;
  EXPECT_EQ(thrown_code([&] { c.validate(); }), ErrorCode::kConfigError);
  c.sizes = {1000, 500};
  EXPECT_EQ(thrown_code([&] { c.validate(); }), ErrorCode::kConfigError);
  c.sizes = {500, 1000};
  c.repeats = 2;
  EXPECT_EQ(thrown_code([&] { c.validate(); }), ErrorCode::kConfigError);
  c.repeats = 3;
  c.cols = 1;
  EXPECT_EQ(thrown_code([&] { c.validate(); }), ErrorCode::kConfigError);
  c.cols = 20;
  EXPECT_NO_THROW(c.validate());
}

TEST(Bench, Median) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_EQ(median({}), 0.0);
}

TEST(Bench, RandomCountMatrixHasNoEmptyMargins) {
  const Matrix n = random_count_matrix(300, 40, 7);
  EXPECT_EQ(n, random_count_matrix(300, 40, 7));
  EXPECT_GE(n.minCoeff(), 0.0);
  EXPECT_LE(n.maxCoeff(), 9.0);
  EXPECT_GT(n.rowwise().sum().minCoeff(), 0.0);
  EXPECT_GT(n.colwise().sum().minCoeff(), 0.0);
  EXPECT_EQ(n, n.array().round().matrix());
}

TEST(Bench, AllStrategiesAgreeAndRecordRepeats) {
  BenchConfig c;
  c.sizes = {500, 1000};
  c.cols = 50;
  const auto results = bench(c);
  ASSERT_EQ(results.size(), 6u);
  for (const auto& r : results) {
    EXPECT_FALSE(r.skipped);
    EXPECT_EQ(r.seconds.size(), 3u);
    EXPECT_EQ(r.median_seconds, median(r.seconds));
    EXPECT_LE(r.residual, kBenchResidualTolerance);
    EXPECT_GT(r.scratch_bytes, 0u);
  }
  EXPECT_EQ(results[0].strategy, ScalingStrategy::kFullDiagonal);
  EXPECT_EQ(results[3].rows, 1000u);
  // Dense diagonals dominate the full strategy's scratch.
  EXPECT_GT(results[3].scratch_bytes, 100 * results[5].scratch_bytes);
}

TEST(Bench, FullDiagonalSkippedAboveMemoryCap) {
  BenchConfig c;
  c.sizes = {300};
  c.cols = 10;
  c.memory_cap_bytes = 1000;
  const auto results = bench(c);
  ASSERT_EQ(results.size(), 3u);
  EXPECT_TRUE(results[0].skipped);
  EXPECT_EQ(results[0].skip_reason, "memory");
  EXPECT_FALSE(results[1].skipped);
  std::ostringstream out;
  write_bench_csv(out, results);
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("strategy,rows,cols,status,", 0), 0u);
  EXPECT_NE(csv.find("full,300,10,skipped(memory)"), std::string::npos);
  EXPECT_NE(csv.find("vectorized,300,10,ok,"), std::string::npos);
}

}  // namespace
}  // namespace jointrank
