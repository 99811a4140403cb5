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

// Independent reference implementations and seeded generators shared by the
// unit and acceptance tests. Everything here is written with plain loops so
// that it shares no code path with the library.

#ifndef JOINTRANK_TESTS_ORACLES_HPP
#define JOINTRANK_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "jointrank/coding.hpp"
#include "jointrank/error.hpp"
#include "jointrank/linalg.hpp"

namespace jointrank::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>()(rng_); }
  long integer(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return uniform() < p; }

  Matrix normal_matrix(Index rows, Index cols) {
    Matrix a(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) a(i, j) = normal();
    }
    return a;
  }

  // Non-negative counts with no empty row or column.
  Matrix count_matrix(Index rows, Index cols, long max_count = 9) {
    Matrix n(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) n(i, j) = static_cast<double>(integer(0, max_count));
    }
    for (Index i = 0; i < rows; ++i) {
      if (n.row(i).sum() == 0.0) n(i, integer(0, cols - 1)) = 1.0;
    }
    for (Index j = 0; j < cols; ++j) {
      if (n.col(j).sum() == 0.0) n(integer(0, rows - 1), j) = 1.0;
    }
    return n;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    }
  }
  return worst;
}

inline double frobenius(const Matrix& a) {
  double s = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
  }
  return std::sqrt(s);
}

// T_ij = (p_ij - r_i c_j) / sqrt(r_i c_j) with margins recounted here.
inline Matrix naive_ca_target(const Matrix& p) {
  std::vector<double> r(p.rows(), 0.0);
  std::vector<double> c(p.cols(), 0.0);
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = 0; j < p.cols(); ++j) {
      r[i] += p(i, j);
      c[j] += p(i, j);
    }
  }
  Matrix t(p.rows(), p.cols());
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = 0; j < p.cols(); ++j) {
      t(i, j) = (p(i, j) - r[i] * c[j]) / std::sqrt(r[i] * c[j]);
    }
  }
  return t;
}

// Nested-loop recount of in-window events, keyed by (case, code).
inline std::map<std::pair<std::string, std::string>, int> recount_events(
    const std::vector<EventRecord>& records, const DateWindow& window) {
  std::map<std::pair<std::string, std::string>, int> counts;
  for (const auto& r : records) {
    if (window.contains(r.timestamp)) ++counts[{r.case_id, r.code}];
  }
  return counts;
}

// Mid-ranks by comparing every pair: rank = 1 + #less + #equal-others / 2.
inline std::vector<double> pairwise_ranks(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0.0;
    double equal = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) less += 1.0;
      if (j != i && v[j] == v[i]) equal += 1.0;
    }
    out[i] = 1.0 + less + equal / 2.0;
  }
  return out;
}

// Sort-based mid-ranks: sort copies, then average positions of equal runs.
inline std::vector<double> sorted_ranks(const std::vector<double>& v) {
  std::vector<std::pair<double, std::size_t>> s;
  for (std::size_t i = 0; i < v.size(); ++i) s.emplace_back(v[i], i);
  std::sort(s.begin(), s.end());
  std::vector<double> out(v.size());
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j].first == s[i].first) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) out[s[k].second] = avg;
    i = j;
  }
  return out;
}

// Direct O(m^2) isotropic Gaussian density at point (x, y).
inline double direct_kde(const std::vector<double>& a, const std::vector<double>& b,
                         double h, double x, double y) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double dx = x - a[j];
    const double dy = y - b[j];
    s += std::exp(-(dx * dx + dy * dy) / (2.0 * h * h));
  }
  return s / (2.0 * std::numbers::pi * h * h * static_cast<double>(a.size()));
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
  const double mu = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline std::vector<std::string> numbered_ids(std::size_t n, const std::string& prefix = "c") {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    std::string d = std::to_string(i);
    ids.push_back(prefix + std::string(6 - std::min<std::size_t>(6, d.size()), '0') + d);
  }
  return ids;
}

// Code of the jointrank::Error thrown by f, or nullopt when nothing is thrown.
template <typename F>
std::optional<ErrorCode> thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace jointrank::testing

#endif  // JOINTRANK_TESTS_ORACLES_HPP
