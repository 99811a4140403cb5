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

#include "jointrank/distance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "jointrank/error.hpp"

namespace jointrank {

int kaiser_guttman_k(std::span<const double> eigenvalues) {
  if (eigenvalues.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no eigenvalues");
  }
  const auto k = std::count_if(eigenvalues.begin(), eigenvalues.end(),
                               [](double e) { return e > 1.0; });
  return k == 0 ? 1 : static_cast<int>(k);
}

StoppingRule StoppingRule::parse(const std::string& text) {
  StoppingRule rule;
  if (text == "kaiser") return rule;
  const auto bad = [&] {
    return Error(ErrorCode::kConfigError,
                 "stopping rule must be 'kaiser', an integer, or 'var:<f>', "
                 "got '" + text + "'");
  };
  if (text.rfind("var:", 0) == 0) {
    const char* first = text.data() + 4;
    const char* last = text.data() + text.size();
    double target = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, target);
    if (ec != std::errc() || ptr != last || !(target > 0.0) || target > 1.0) {
      throw bad();
    }
    rule.kind = Kind::kVarianceFraction;
    rule.variance_target = target;
    return rule;
  }
  int k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || ptr != text.data() + text.size() || k < 1) {
    throw bad();
  }
  rule.kind = Kind::kFixed;
  rule.fixed_k = k;
  return rule;
}

std::string StoppingRule::to_string() const {
  switch (kind) {
    case Kind::kKaiser:
      return "kaiser";
    case Kind::kFixed:
      return std::to_string(fixed_k);
    case Kind::kVarianceFraction: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), variance_target);
      return "var:" + std::string(buf, res.ptr);
    }
  }
  return "kaiser";
}

std::vector<double> kaiser_scale(const Ordination& ord) {
  std::vector<double> out(ord.eigenvalues.data(),
                          ord.eigenvalues.data() + ord.eigenvalues.size());
  if (ord.method == OrdinationMethod::kPCA || out.size() < 2) return out;
  const double nontrivial = static_cast<double>(out.size() - 1);
  double total = 0.0;
  for (double e : out) total += e;
  const double mean = total / nontrivial;
  if (mean > 0.0) {
    for (double& e : out) e /= mean;
  }
  return out;
}

int select_components(const Ordination& ord, const StoppingRule& rule) {
  const auto available = static_cast<int>(ord.components());
  if (available < 1) {
    throw Error(ErrorCode::kInvalidInput, "ordination has no components");
  }
  switch (rule.kind) {
    case StoppingRule::Kind::kKaiser:
      return kaiser_guttman_k(kaiser_scale(ord));
    case StoppingRule::Kind::kFixed:
      if (rule.fixed_k > available) {
        throw Error(ErrorCode::kInvalidInput,
                    "fixed k = " + std::to_string(rule.fixed_k) +
                        " exceeds the " + std::to_string(available) +
                        " available components");
      }
      return rule.fixed_k;
    case StoppingRule::Kind::kVarianceFraction: {
      double cumulative = 0.0;
      for (int j = 0; j < available; ++j) {
        cumulative += ord.variance_fraction[j];
        if (cumulative >= rule.variance_target - 1e-12) return j + 1;
      }
      return available;
    }
  }
  return 1;
}

DistanceVector ordinal_distances(const Matrix& f, int k,
                                 std::vector<std::string> case_ids) {
  if (k < 1 || k > f.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                "k = " + std::to_string(k) + " outside [1, " +
                    std::to_string(f.cols()) + "]");
  }
  if (static_cast<Index>(case_ids.size()) != f.rows()) {
    throw Error(ErrorCode::kInvalidInput,
                "case id count does not match coordinate rows");
  }
  DistanceVector out;
  out.case_ids = std::move(case_ids);
  out.k_used = k;
  out.distances.resize(static_cast<std::size_t>(f.rows()));
  for (Index i = 0; i < f.rows(); ++i) {
    double sum = 0.0;
    for (Index j = 0; j < k; ++j) sum += f(i, j) * f(i, j);
    out.distances[static_cast<std::size_t>(i)] = std::sqrt(sum);
  }
  return out;
}

DistanceVector ordinal_distances(const Ordination& ord, int k) {
  return ordinal_distances(ord.f, k, ord.case_ids);
}

Histogram histogram(std::span<const double> values, int bins) {
  if (bins < 1) {
    throw Error(ErrorCode::kInvalidInput, "histogram needs at least one bin");
  }
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  if (values.empty()) {
    h.edges.assign(static_cast<std::size_t>(bins) + 1, 0.0);
    return h;
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  double hi = *hi_it;
  if (hi == lo) hi = lo + 1.0;
  const double width = (hi - lo) / bins;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + width * b;
  h.edges.back() = hi;
  for (double x : values) {
    auto b = static_cast<int>((x - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

}  // namespace jointrank
