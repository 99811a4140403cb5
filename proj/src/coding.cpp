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

#include "jointrank/coding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>

#include "jointrank/error.hpp"
#include "random_util.hpp"

namespace jointrank {

namespace {

// Assigns dense ids in first-seen order; `sorted()` yields the lexicographic
// order and the remapping from first-seen ids to sorted positions.
class Interner {
 public:
  std::size_t id(const std::string& name) {
    auto [it, inserted] = ids_.try_emplace(name, names_.size());
    if (inserted) names_.push_back(name);
    return it->second;
  }

  std::size_t size() const { return names_.size(); }

  std::pair<std::vector<std::string>, std::vector<std::size_t>> sorted() const {
    std::vector<std::size_t> order(names_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return names_[a] < names_[b];
    });
    std::vector<std::string> names;
    names.reserve(order.size());
    std::vector<std::size_t> position(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      names.push_back(names_[order[k]]);
      position[order[k]] = k;
    }
    return {std::move(names), std::move(position)};
  }

 private:
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::string> names_;
};

Date add_months(Date d, int months) {
  using namespace std::chrono;
  year_month_day ymd{d};
  year_month_day shifted = ymd + std::chrono::months{months};
  if (!shifted.ok()) {
    shifted = shifted.year() / shifted.month() / last;
  }
  return sys_days{shifted};
}

// Weekday index with Monday = 0.
int weekday_index(Date d) {
  const unsigned iso = std::chrono::weekday{d}.iso_encoding();  // Mon = 1
  return static_cast<int>(iso) - 1;
}

}  // namespace

DateWindow::DateWindow(Date start, Date end) : start_(start), end_(end) {
  if (start_ > end_) {
    throw Error(ErrorCode::kInvalidInput, "window start is after window end");
  }
}

DateWindow DateWindow::ending_at(Date end, int months) {
  return DateWindow(add_months(end, -months) + std::chrono::days{1}, end);
}

DateWindow DateWindow::starting_at(Date start, int months) {
  return DateWindow(start, add_months(start, months) - std::chrono::days{1});
}

std::string_view to_string(CodingKind kind) {
  switch (kind) {
    case CodingKind::kEventFrequency:
      return "event-frequency";
    case CodingKind::kConsumptionDayOfWeek:
      return "consumption-dayofweek";
    case CodingKind::kGeneric:
      return "generic";
  }
  return "generic";
}

CodingResult code_events(std::span<const EventRecord> records,
                         const DateWindow& window) {
  Interner cases;
  Interner codes;
  struct Hit {
    std::size_t case_id;
    std::size_t code;
  };
  std::vector<Hit> hits;
  hits.reserve(records.size());
  for (const auto& rec : records) {
    const std::size_t c = cases.id(rec.case_id);
    const std::size_t v = codes.id(rec.code);
    if (window.contains(rec.timestamp)) hits.push_back({c, v});
  }

  auto [case_names, case_pos] = cases.sorted();
  auto [code_names, code_pos] = codes.sorted();
  Matrix counts = Matrix::Zero(static_cast<Index>(case_names.size()),
                               static_cast<Index>(code_names.size()));
  for (const auto& h : hits) {
    counts(static_cast<Index>(case_pos[h.case_id]),
           static_cast<Index>(code_pos[h.code])) += 1.0;
  }

  CodingResult result;
  std::vector<Index> keep_rows;
  std::vector<Index> keep_cols;
  for (Index i = 0; i < counts.rows(); ++i) {
    if ((counts.row(i).array() != 0.0).any()) {
      keep_rows.push_back(i);
    } else {
      result.report.dropped_cases.push_back(case_names[i]);
    }
  }
  for (Index j = 0; j < counts.cols(); ++j) {
    if ((counts.col(j).array() != 0.0).any()) {
      keep_cols.push_back(j);
    } else {
      result.report.dropped_variables.push_back(code_names[j]);
    }
  }

  CodedMatrix& coded = result.coded;
  coded.kind = CodingKind::kEventFrequency;
  if (keep_rows.empty() || keep_cols.empty()) {
    coded.matrix.resize(0, 0);
    return result;
  }
  coded.matrix = counts(keep_rows, keep_cols);
  for (Index i : keep_rows) coded.case_ids.push_back(case_names[i]);
  for (Index j : keep_cols) coded.variable_names.push_back(code_names[j]);
  return result;
}

double double_log(double x) {
  return std::log(std::log(x + 1.0) + 1.0) + 1.0;
}

CodedMatrix double_log_transform(CodedMatrix coded) {
  require_finite(coded.matrix, "double-log input");
  if ((coded.matrix.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidInput,
                "double-log transform requires non-negative entries");
  }
  coded.matrix = coded.matrix.unaryExpr([](double x) { return double_log(x); });
  return coded;
}

CodingResult code_consumption(std::span<const ConsumptionRecord> records,
                              const DateWindow& window) {
  Interner cases;
  struct Tally {
    std::array<double, 7> sum{};
    std::array<int, 7> days{};
  };
  std::vector<Tally> tallies;
  for (const auto& rec : records) {
    const std::size_t c = cases.id(rec.case_id);
    if (c == tallies.size()) tallies.emplace_back();
    if (!window.contains(rec.date)) continue;
    double total = 0.0;
    for (double b : rec.bins) total += b;
    const int w = weekday_index(rec.date);
    tallies[c].sum[w] += total;
    tallies[c].days[w] += 1;
  }

  auto [names, pos] = cases.sorted();
  std::vector<std::size_t> by_position(names.size());
  for (std::size_t id = 0; id < pos.size(); ++id) by_position[pos[id]] = id;

  CodingResult result;
  CodedMatrix& coded = result.coded;
  coded.kind = CodingKind::kConsumptionDayOfWeek;
  std::vector<std::array<double, 7>> rows;
  for (std::size_t k = 0; k < names.size(); ++k) {
    const Tally& t = tallies[by_position[k]];
    std::array<double, 7> row{};
    double observed_sum = 0.0;
    int observed = 0;
    for (int w = 0; w < 7; ++w) {
      if (t.days[w] > 0) {
        row[w] = t.sum[w] / t.days[w];
        observed_sum += row[w];
        ++observed;
      }
    }
    if (observed == 0) {
      result.report.dropped_cases.push_back(names[k]);
      continue;
    }
    if (observed < 7) {
      const double fill = observed_sum / observed;
      for (int w = 0; w < 7; ++w) {
        if (t.days[w] == 0) row[w] = fill;
      }
      result.report.imputed_cases.push_back(names[k]);
    }
    rows.push_back(row);
    coded.case_ids.push_back(names[k]);
  }

  if (rows.empty()) {
    coded.matrix.resize(0, 0);
    return result;
  }
  coded.matrix.resize(static_cast<Index>(rows.size()), 7);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int w = 0; w < 7; ++w) coded.matrix(static_cast<Index>(i), w) = rows[i][w];
  }
  coded.variable_names.assign(weekday_names().begin(), weekday_names().end());
  return result;
}

std::vector<std::vector<std::string>> random_partition(
    std::span<const std::string> variables, const PartitionSpec& spec) {
  if (spec.mode != PartitionMode::kRandom) {
    throw Error(ErrorCode::kInvalidInput,
                "random_partition requires random partition mode");
  }
  if (spec.part_count < 2) {
    throw Error(ErrorCode::kInvalidPartition, "need at least 2 parts");
  }
  const auto n = variables.size();
  const auto k = static_cast<std::size_t>(spec.part_count);
  if (k > n) {
    throw Error(ErrorCode::kInvalidPartition,
                std::to_string(k) + " parts requested for " +
                    std::to_string(n) + " variables");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(spec.seed);
  internal::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<std::string>> parts(k);
  std::size_t next = 0;
  for (std::size_t part = 0; part < k; ++part) {
    const std::size_t size = n / k + (part < n % k ? 1 : 0);
    std::vector<std::size_t> members(order.begin() + next,
                                     order.begin() + next + size);
    next += size;
    std::sort(members.begin(), members.end());
    for (std::size_t idx : members) parts[part].push_back(variables[idx]);
  }
  return parts;
}

std::map<std::string, double> random_numeric_coding(
    std::span<const std::string> levels, std::uint64_t seed) {
  std::map<std::string, double> mapping;
  std::set<double> used;
  std::mt19937_64 rng(seed);
  for (const auto& level : levels) {
    double u;
    do {
      u = internal::unit_uniform(rng);
    } while (used.count(u) != 0);
    if (!mapping.emplace(level, u).second) {
      throw Error(ErrorCode::kInvalidInput,
                  "duplicate nominal level '" + level + "'");
    }
    used.insert(u);
  }
  return mapping;
}

CodedMatrix select_variables(const CodedMatrix& coded,
                             std::span<const std::string> names) {
  std::unordered_map<std::string, Index> column;
  for (std::size_t j = 0; j < coded.variable_names.size(); ++j) {
    column.emplace(coded.variable_names[j], static_cast<Index>(j));
  }
  std::vector<Index> cols;
  for (const auto& name : names) {
    auto it = column.find(name);
    if (it == column.end()) {
      throw Error(ErrorCode::kInvalidInput, "unknown variable '" + name + "'");
    }
    cols.push_back(it->second);
  }
  CodedMatrix out;
  out.kind = coded.kind;
  out.case_ids = coded.case_ids;
  out.variable_names.assign(names.begin(), names.end());
  out.matrix = coded.matrix(Eigen::all, cols);
  return out;
}

CodedMatrix join_on_cases(const CodedMatrix& a, const CodedMatrix& b) {
  std::unordered_map<std::string, Index> row_b;
  for (std::size_t i = 0; i < b.case_ids.size(); ++i) {
    row_b.emplace(b.case_ids[i], static_cast<Index>(i));
  }
  std::vector<std::pair<std::string, std::pair<Index, Index>>> common;
  for (std::size_t i = 0; i < a.case_ids.size(); ++i) {
    auto it = row_b.find(a.case_ids[i]);
    if (it != row_b.end()) {
      common.push_back({a.case_ids[i], {static_cast<Index>(i), it->second}});
    }
  }
  std::sort(common.begin(), common.end());

  CodedMatrix out;
  out.kind = CodingKind::kGeneric;
  out.variable_names = a.variable_names;
  out.variable_names.insert(out.variable_names.end(), b.variable_names.begin(),
                            b.variable_names.end());
  out.matrix.resize(static_cast<Index>(common.size()), a.cols() + b.cols());
  for (std::size_t k = 0; k < common.size(); ++k) {
    const auto row = static_cast<Index>(k);
    out.case_ids.push_back(common[k].first);
    out.matrix.row(row).head(a.cols()) = a.matrix.row(common[k].second.first);
    out.matrix.row(row).tail(b.cols()) = b.matrix.row(common[k].second.second);
  }
  return out;
}

}  // namespace jointrank
