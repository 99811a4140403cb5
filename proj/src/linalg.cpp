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

#include "jointrank/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "jointrank/error.hpp"

namespace jointrank {

namespace {

constexpr double kMarginSumTolerance = 1e-12;
constexpr double kSingularValueCutoff = 1e-12;

double compensated_sum(const Vector& v) {
  double sum = 0.0;
  double carry = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double y = v[i] - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Minimal compressed-sparse-row matrix; enough to hold a scaling diagonal the
// way a general sparse library would.
struct CsrMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int64_t> col_idx;
  std::vector<double> values;

  static CsrMatrix diagonal(const Vector& d) {
    CsrMatrix s;
    s.rows = s.cols = d.size();
    s.row_ptr.resize(static_cast<std::size_t>(d.size()) + 1);
    s.col_idx.reserve(static_cast<std::size_t>(d.size()));
    s.values.reserve(static_cast<std::size_t>(d.size()));
    s.row_ptr[0] = 0;
    for (Index i = 0; i < d.size(); ++i) {
      if (d[i] != 0.0) {
        s.col_idx.push_back(i);
        s.values.push_back(d[i]);
      }
      s.row_ptr[static_cast<std::size_t>(i) + 1] =
          static_cast<std::int64_t>(s.values.size());
    }
    return s;
  }

  std::size_t bytes() const {
    return row_ptr.size() * sizeof(std::int64_t) +
           col_idx.size() * sizeof(std::int64_t) +
           values.size() * sizeof(double);
  }
};

void record(ScratchUsage* scratch, std::size_t bytes) {
  if (scratch != nullptr) scratch->bytes = bytes;
}

std::size_t doubles(Index count) {
  return static_cast<std::size_t>(count) * sizeof(double);
}

// Shape, finiteness and strictly-positive-margin checks shared by the three
// target strategies. Returns nothing; throws on violation.
void check_target_inputs(const Matrix& p, const MarginVector& r,
                         const MarginVector& c) {
  if (p.rows() < 1 || p.cols() < 1) {
    throw Error(ErrorCode::kInvalidInput, "correspondence matrix is empty");
  }
  if (r.size() != p.rows() || c.size() != p.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                "margin lengths do not match the correspondence matrix (" +
                    std::to_string(r.size()) + ", " +
                    std::to_string(c.size()) + " vs " +
                    std::to_string(p.rows()) + "x" +
                    std::to_string(p.cols()) + ")");
  }
  require_finite(p, "correspondence matrix");
  for (Index i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) {
      throw Error(ErrorCode::kZeroMargin,
                  "row margin " + std::to_string(i) + " is zero",
                  static_cast<std::size_t>(i));
    }
  }
  for (Index j = 0; j < c.size(); ++j) {
    if (!(c[j] > 0.0)) {
      throw Error(ErrorCode::kZeroMargin,
                  "column margin " + std::to_string(j) + " is zero",
                  static_cast<std::size_t>(r.size() + j));
    }
  }
}

Vector inverse_sqrt(const Vector& v) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = 1.0 / std::sqrt(v[i]);
  return out;
}

void check_row_scale(const SvdResult& svd, const MarginVector& row_scale) {
  if (row_scale.size() != svd.u.rows()) {
    throw Error(ErrorCode::kInvalidInput,
                "row scale length " + std::to_string(row_scale.size()) +
                    " does not match " + std::to_string(svd.u.rows()) +
                    " rows of U");
  }
  if (svd.singular_values.size() != svd.u.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                "singular value count does not match columns of U");
  }
  for (Index i = 0; i < row_scale.size(); ++i) {
    if (!(row_scale[i] > 0.0)) {
      throw Error(ErrorCode::kZeroMargin,
                  "row scale " + std::to_string(i) + " is zero",
                  static_cast<std::size_t>(i));
    }
  }
}

}  // namespace

void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " contains NaN or infinite entries");
  }
}

MarginVector MarginVector::from_values(Vector values) {
  for (Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw Error(ErrorCode::kInvalidInput,
                  "margin entry " + std::to_string(i) +
                      " is negative or not finite",
                  static_cast<std::size_t>(i));
    }
  }
  const double sum = compensated_sum(values);
  if (std::abs(sum - 1.0) > kMarginSumTolerance) {
    throw Error(ErrorCode::kInvalidInput,
                "margin entries sum to " + std::to_string(sum) + ", not 1");
  }
  return MarginVector(std::move(values));
}

MarginVector MarginVector::uniform(Index size) {
  if (size < 1) {
    throw Error(ErrorCode::kInvalidInput, "uniform margin needs size >= 1");
  }
  return MarginVector(Vector::Constant(size, 1.0 / static_cast<double>(size)));
}

Matrix correspondence_matrix(const Matrix& counts) {
  require_finite(counts, "count matrix");
  if (counts.size() == 0) {
    throw Error(ErrorCode::kInvalidInput, "count matrix is empty");
  }
  if ((counts.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidInput, "count matrix has negative entries");
  }
  // Sum by rows first so the grand total matches the row margins' sum.
  const Vector row_sums = counts.rowwise().sum();
  const double total = compensated_sum(row_sums);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "count matrix has zero grand total");
  }
  return counts / total;
}

Margins correspondence_margins(const Matrix& p) {
  return Margins{MarginVector::from_values(p.rowwise().sum()),
                 MarginVector::from_values(p.colwise().sum().transpose())};
}

SvdResult svd(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw Error(ErrorCode::kInvalidInput, "svd of an empty matrix");
  }
  require_finite(a, "svd input");

  Eigen::BDCSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure,
                "bidiagonal divide-and-conquer SVD did not converge "
                "(iteration count not reported by the solver)");
  }

  SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  if (!out.u.allFinite() || !out.v.allFinite() ||
      !out.singular_values.allFinite()) {
    throw Error(ErrorCode::kNumericalFailure, "SVD produced non-finite output");
  }

  const Index q = out.singular_values.size();
  const double sigma_max = q > 0 ? out.singular_values[0] : 0.0;
  for (Index j = 0; j < q; ++j) {
    if (out.singular_values[j] < kSingularValueCutoff * sigma_max ||
        out.singular_values[j] < 0.0) {
      out.singular_values[j] = 0.0;
    }
  }

  for (Index j = 0; j < out.u.cols(); ++j) {
    auto col = out.u.col(j);
    const double peak = col.cwiseAbs().maxCoeff();
    Index pivot = 0;
    for (Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) >= peak * (1.0 - 1e-9)) {
        pivot = i;
        break;
      }
    }
    if (col[pivot] < 0.0) {
      col = -col;
      out.v.col(j) = -out.v.col(j);
    }
  }
  return out;
}

std::string_view to_string(ScalingStrategy strategy) {
  switch (strategy) {
    case ScalingStrategy::kFullDiagonal:
      return "full";
    case ScalingStrategy::kSparseDiagonal:
      return "sparse";
    case ScalingStrategy::kVectorized:
      return "vectorized";
  }
  return "unknown";
}

Matrix ca_target_full_diagonal(const Matrix& p, const MarginVector& r,
                               const MarginVector& c, ScratchUsage* scratch) {
  check_target_inputs(p, r, c);
  const Index m = p.rows();
  const Index n = p.cols();

  Matrix dr = Matrix::Zero(m, m);
  dr.diagonal() = inverse_sqrt(r.values());
  Matrix dc = Matrix::Zero(n, n);
  dc.diagonal() = inverse_sqrt(c.values());

  const Matrix residual = p - r.values() * c.values().transpose();
  const Matrix left = dr * residual;
  Matrix t = left * dc;

  record(scratch, doubles(m * m) + doubles(n * n) + 2 * doubles(m * n));
  return t;
}

Matrix ca_target_sparse_diagonal(const Matrix& p, const MarginVector& r,
                                 const MarginVector& c, ScratchUsage* scratch) {
  check_target_inputs(p, r, c);
  const Index m = p.rows();
  const Index n = p.cols();

  const CsrMatrix rs = CsrMatrix::diagonal(inverse_sqrt(r.values()));
  const CsrMatrix cs = CsrMatrix::diagonal(inverse_sqrt(c.values()));
  const Vector& rv = r.values();
  const Vector& cv = c.values();

  Matrix t(m, n);
  Vector left_row(n);
  Vector out_row(n);
  for (Index i = 0; i < m; ++i) {
    // left_row = (rs * (P - r c^T)).row(i)
    left_row.setZero();
    for (auto e = rs.row_ptr[i]; e < rs.row_ptr[i + 1]; ++e) {
      const Index k = rs.col_idx[e];
      const double w = rs.values[e];
      for (Index l = 0; l < n; ++l) {
        left_row[l] += w * (p(k, l) - rv[k] * cv[l]);
      }
    }
    // out_row = left_row * cs
    out_row.setZero();
    for (Index l = 0; l < n; ++l) {
      for (auto e = cs.row_ptr[l]; e < cs.row_ptr[l + 1]; ++e) {
        out_row[cs.col_idx[e]] += left_row[l] * cs.values[e];
      }
    }
    t.row(i) = out_row.transpose();
  }

  record(scratch, rs.bytes() + cs.bytes() + doubles(2 * n));
  return t;
}

Matrix ca_target_vectorized(const Matrix& p, const MarginVector& r,
                            const MarginVector& c, ScratchUsage* scratch) {
  check_target_inputs(p, r, c);
  const Vector rsq = inverse_sqrt(r.values());
  const Vector csq = inverse_sqrt(c.values());
  const Vector& rv = r.values();

  Matrix t(p.rows(), p.cols());
  for (Index j = 0; j < p.cols(); ++j) {
    const double cj = c[j];
    t.col(j) = ((p.col(j) - rv * cj).cwiseProduct(rsq)) * csq[j];
  }

  record(scratch, doubles(rsq.size() + csq.size()));
  return t;
}

Matrix ca_target(const Matrix& p, const MarginVector& r, const MarginVector& c,
                 ScalingStrategy strategy, ScratchUsage* scratch) {
  switch (strategy) {
    case ScalingStrategy::kFullDiagonal:
      return ca_target_full_diagonal(p, r, c, scratch);
    case ScalingStrategy::kSparseDiagonal:
      return ca_target_sparse_diagonal(p, r, c, scratch);
    case ScalingStrategy::kVectorized:
      break;
  }
  return ca_target_vectorized(p, r, c, scratch);
}

Matrix principal_coordinates(const SvdResult& svd,
                             const MarginVector& row_scale,
                             ScalingStrategy strategy, ScratchUsage* scratch) {
  check_row_scale(svd, row_scale);
  const Index m = svd.u.rows();
  const Index q = svd.u.cols();
  const Vector rsq = inverse_sqrt(row_scale.values());

  switch (strategy) {
    case ScalingStrategy::kFullDiagonal: {
      Matrix dq = Matrix::Zero(m, m);
      dq.diagonal() = rsq;
      Matrix s = Matrix::Zero(q, q);
      s.diagonal() = svd.singular_values;
      const Matrix left = dq * svd.u;
      Matrix f = left * s;
      record(scratch, doubles(m * m) + doubles(q * q) + doubles(m * q) +
                          doubles(m));
      return f;
    }
    case ScalingStrategy::kSparseDiagonal: {
      const CsrMatrix dq = CsrMatrix::diagonal(rsq);
      const CsrMatrix s = CsrMatrix::diagonal(svd.singular_values);
      Matrix f(m, q);
      Vector left_row(q);
      Vector out_row(q);
      for (Index i = 0; i < m; ++i) {
        left_row.setZero();
        for (auto e = dq.row_ptr[i]; e < dq.row_ptr[i + 1]; ++e) {
          left_row += dq.values[e] * svd.u.row(dq.col_idx[e]).transpose();
        }
        out_row.setZero();
        for (Index l = 0; l < q; ++l) {
          for (auto e = s.row_ptr[l]; e < s.row_ptr[l + 1]; ++e) {
            out_row[s.col_idx[e]] += left_row[l] * s.values[e];
          }
        }
        f.row(i) = out_row.transpose();
      }
      record(scratch, dq.bytes() + s.bytes() + doubles(2 * q) + doubles(m));
      return f;
    }
    case ScalingStrategy::kVectorized:
      break;
  }

  Matrix f(m, q);
  for (Index j = 0; j < q; ++j) {
    f.col(j) = svd.u.col(j).cwiseProduct(rsq) * svd.singular_values[j];
  }
  record(scratch, doubles(m));
  return f;
}

}  // namespace jointrank
