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

#include "jointrank/ordination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "jointrank/error.hpp"
#include "oracles.hpp"

namespace jointrank {
namespace {

using testing::Gen;
using testing::max_abs_diff;
using testing::thrown_code;

CodedMatrix labeled(Matrix m) {
  CodedMatrix c;
  c.case_ids = testing::numbered_ids(static_cast<std::size_t>(m.rows()), "r");
  c.variable_names = testing::numbered_ids(static_cast<std::size_t>(m.cols()), "v");
  c.matrix = std::move(m);
  return c;
}

void expect_spectrum_invariants(const Ordination& o) {
  ASSERT_EQ(o.eigenvalues.size(), o.singular_values.size());
  double fraction = 0.0;
  for (Index j = 0; j < o.eigenvalues.size(); ++j) {
    EXPECT_NEAR(o.eigenvalues[j], o.singular_values[j] * o.singular_values[j], 1e-12);
    if (j > 0) {
      EXPECT_LE(o.eigenvalues[j], o.eigenvalues[j - 1]);
    }
    fraction += o.variance_fraction[j];
  }
  if (o.eigenvalues.sum() > 0.0) {
    EXPECT_NEAR(fraction, 1.0, 1e-10);
  }
}

TEST(OrdinateCa, HandWorkedDiagonal) {
  Matrix n(2, 2);
  n << 2, 0, 0, 2;
  const Ordination o = ordinate_ca(labeled(n));
  EXPECT_EQ(o.method, OrdinationMethod::kCA);
  EXPECT_NEAR(o.singular_values[0], 1.0, 1e-12);
  EXPECT_NEAR(o.singular_values[1], 0.0, 1e-12);
  EXPECT_NEAR(o.f(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(o.f(1, 0), -1.0, 1e-12);
  expect_spectrum_invariants(o);
}

TEST(OrdinateCa, UniformTableHasNoInertia) {
  const Ordination o = ordinate_ca(labeled(Matrix::Constant(4, 3, 5.0)));
  for (Index j = 0; j < o.components(); ++j) {
    EXPECT_EQ(o.singular_values[j], 0.0);
    EXPECT_EQ(o.variance_fraction[j], 0.0);
  }
  const auto s = scree(o);
  EXPECT_EQ(s.back().cumulative_fraction, 0.0);
}

TEST(OrdinateCa, DegenerateAndZeroMarginInputs) {
  EXPECT_EQ(thrown_code([] { ordinate_ca(labeled(Matrix::Ones(1, 4))); }),
            ErrorCode::kInvalidInput);
  EXPECT_EQ(thrown_code([] { ordinate_ca(labeled(Matrix::Ones(4, 1))); }),
            ErrorCode::kInvalidInput);
  Matrix n = Matrix::Ones(3, 3);
  n.row(1).setZero();
  EXPECT_EQ(thrown_code([&] { ordinate_ca(labeled(n)); }), ErrorCode::kZeroMargin);
  CodedMatrix bad = labeled(Matrix::Ones(3, 3));
  bad.case_ids.pop_back();
  EXPECT_EQ(thrown_code([&] { ordinate_ca(bad); }), ErrorCode::kInvalidInput);
}

TEST(OrdinateCa, PropertyCentroidAndInertiaIdentities) {
  Gen gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix n = gen.count_matrix(gen.integer(2, 80), gen.integer(2, 25));
    const Ordination o = ordinate_ca(labeled(n));
    expect_spectrum_invariants(o);
    const Vector r = n.rowwise().sum() / n.sum();
    for (Index j = 0; j < o.f.cols(); ++j) {
      EXPECT_NEAR(r.dot(o.f.col(j)), 0.0, 1e-10);
    }
    const Matrix t = testing::naive_ca_target(n / n.sum());
    EXPECT_NEAR(o.eigenvalues.sum(), t.squaredNorm(), 1e-10);
  }
}

TEST(OrdinateCa, PropertyStrategyInvariance) {
  Gen gen(32);
  for (int trial = 0; trial < 15; ++trial) {
    const CodedMatrix c = labeled(gen.count_matrix(gen.integer(2, 120), gen.integer(2, 30)));
    const Ordination v = ordinate_ca(c, ScalingStrategy::kVectorized);
    for (auto s : {ScalingStrategy::kFullDiagonal, ScalingStrategy::kSparseDiagonal}) {
      const Ordination o = ordinate_ca(c, s);
      EXPECT_LE(max_abs_diff(o.f, v.f), 1e-12);
      EXPECT_LE(max_abs_diff(o.v, v.v), 1e-12);
      EXPECT_LE((o.eigenvalues - v.eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(OrdinateCa, PropertyRowPermutationPermutesF) {
  Gen gen(33);
  for (int trial = 0; trial < 10; ++trial) {
    const Index m = gen.integer(3, 40);
    const CodedMatrix c = labeled(gen.count_matrix(m, gen.integer(2, 12)));
    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen.engine());
    CodedMatrix p = c;
    for (Index i = 0; i < m; ++i) {
      p.matrix.row(i) = c.matrix.row(perm[i]);
      p.case_ids[i] = c.case_ids[perm[i]];
    }
    const Ordination a = ordinate_ca(c);
    const Ordination b = ordinate_ca(p);
    EXPECT_LE((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
    // Singular vectors are unique up to sign per component with distinct
    // singular values; compare the sign-free squared coordinates.
    for (Index j = 0; j < a.components(); ++j) {
      const bool distinct =
          (j == 0 || a.singular_values[j - 1] - a.singular_values[j] > 1e-6) &&
          (j + 1 == a.components() || a.singular_values[j] - a.singular_values[j + 1] > 1e-6);
      if (!distinct || a.singular_values[j] == 0.0) continue;
      for (Index i = 0; i < m; ++i) {
        EXPECT_NEAR(std::abs(b.f(i, j)), std::abs(a.f(perm[i], j)), 1e-10);
      }
    }
  }
}

TEST(OrdinatePca, IndependentColumnsHaveUnitEigenvalues) {
  Gen gen(34);
  const Ordination o = ordinate_pca(labeled(gen.normal_matrix(10000, 2)));
  EXPECT_NEAR(o.eigenvalues[0], 1.0, 0.15);
  EXPECT_NEAR(o.eigenvalues[1], 1.0, 0.15);
}

TEST(OrdinatePca, DuplicatedColumnSpectrum) {
  Gen gen(35);
  const Matrix x = gen.normal_matrix(200, 1);
  Matrix m(200, 2);
  m << x, x;
  const Ordination o = ordinate_pca(labeled(m));
  EXPECT_NEAR(o.eigenvalues[0], 2.0, 1e-10);
  EXPECT_NEAR(o.eigenvalues[1], 0.0, 1e-10);
}

TEST(OrdinatePca, ConstantColumnIsReportedByIndex) {
  Gen gen(36);
  Matrix m = gen.normal_matrix(20, 3);
  m.col(1).setConstant(4.2);
  try {
    ordinate_pca(labeled(m));
    FAIL() << "expected ConstantColumn";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConstantColumn);
    EXPECT_EQ(e.index(), std::optional<std::size_t>(1));
    EXPECT_NE(std::string(e.what()).find("v000001"), std::string::npos);
  }
  EXPECT_EQ(thrown_code([] { ordinate_pca(labeled(Matrix::Ones(1, 3))); }),
            ErrorCode::kInvalidInput);
}

TEST(OrdinatePca, PropertyTraceFAndUncorrelatedScores) {
  Gen gen(37);
  for (int trial = 0; trial < 30; ++trial) {
    const Index m = gen.integer(8, 300);
    const Index p = gen.integer(1, 7);
    Matrix x = gen.normal_matrix(m, p);
    // Mix columns so that the spectrum is not flat.
    x = testing::naive_matmul(x, gen.normal_matrix(p, p)) +
        0.1 * gen.normal_matrix(m, p);
    const Ordination o = ordinate_pca(labeled(x));
    expect_spectrum_invariants(o);
    EXPECT_NEAR(o.eigenvalues.sum(), static_cast<double>(p), 1e-8);

    // F = Z V with Z standardized by the population sd.
    Matrix z(m, p);
    for (Index j = 0; j < p; ++j) {
      const double mu = x.col(j).mean();
      double ss = 0.0;
      for (Index i = 0; i < m; ++i) ss += (x(i, j) - mu) * (x(i, j) - mu);
      const double sd = std::sqrt(ss / static_cast<double>(m));
      for (Index i = 0; i < m; ++i) z(i, j) = (x(i, j) - mu) / sd;
    }
    EXPECT_LE(max_abs_diff(o.f, testing::naive_matmul(z, o.v)), 1e-9);

    for (Index a = 0; a < o.f.cols(); ++a) {
      for (Index b = a + 1; b < o.f.cols(); ++b) {
        const double cov = o.f.col(a).dot(o.f.col(b)) / static_cast<double>(m);
        EXPECT_LE(std::abs(cov), 1e-8);
      }
    }
  }
}

TEST(Scree, CumulativeFractions) {
  Ordination o;
  o.eigenvalues = Vector(2);
  o.eigenvalues << 3.0, 1.0;
  o.variance_fraction = o.eigenvalues / 4.0;
  auto s = scree(o);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].component, 1);
  EXPECT_DOUBLE_EQ(s[0].cumulative_fraction, 0.75);
  EXPECT_DOUBLE_EQ(s[1].cumulative_fraction, 1.0);

  o.eigenvalues = Vector::Ones(1);
  o.variance_fraction = Vector::Ones(1);
  s = scree(o);
  EXPECT_DOUBLE_EQ(s[0].cumulative_fraction, 1.0);
}

TEST(Scree, SevenStandardizedColumnsSumToSeven) {
  Gen gen(38);
  Matrix x = gen.normal_matrix(500, 7);
  x.col(3) += 2.0 * x.col(0);
  const Ordination o = ordinate_pca(labeled(x));
  const auto s = scree(o);
  double total = 0.0;
  for (const auto& e : s) total += e.eigenvalue;
  EXPECT_NEAR(total, 7.0, 1e-8);
  EXPECT_NEAR(s.back().cumulative_fraction, 1.0, 1e-10);
}

}  // namespace
}  // namespace jointrank
