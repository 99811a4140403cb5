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

#ifndef JOINTRANK_CODING_HPP
#define JOINTRANK_CODING_HPP

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "jointrank/linalg.hpp"

namespace jointrank {

using Date = std::chrono::sys_days;
using Timestamp = std::chrono::sys_seconds;

inline constexpr int kBinsPerDay = 48;
inline constexpr int kDefaultWindowMonths = 3;

// Inclusive range of calendar dates. Throws InvalidInput if start > end.
class DateWindow {
 public:
  DateWindow(Date start, Date end);

  // [end - months + 1 day, end]
  static DateWindow ending_at(Date end, int months = kDefaultWindowMonths);
  // [start, start + months - 1 day]
  static DateWindow starting_at(Date start, int months = kDefaultWindowMonths);

  Date start() const noexcept { return start_; }
  Date end() const noexcept { return end_; }
  bool contains(Date d) const noexcept { return start_ <= d && d <= end_; }
  bool contains(Timestamp t) const noexcept {
    return contains(std::chrono::floor<std::chrono::days>(t));
  }

 private:
  Date start_;
  Date end_;
};

struct EventRecord {
  std::string case_id;
  Timestamp timestamp;
  std::string code;
};

struct ConsumptionRecord {
  std::string case_id;
  Date date;
  std::array<double, kBinsPerDay> bins{};
};

enum class CodingKind { kEventFrequency, kConsumptionDayOfWeek, kGeneric };

std::string_view to_string(CodingKind kind);

// A cases-by-variables matrix with its row and column labels.
struct CodedMatrix {
  Matrix matrix;
  std::vector<std::string> case_ids;
  std::vector<std::string> variable_names;
  CodingKind kind = CodingKind::kGeneric;

  Index rows() const noexcept { return matrix.rows(); }
  Index cols() const noexcept { return matrix.cols(); }
};

// Identifiers removed or altered while coding.
struct DropReport {
  std::vector<std::string> dropped_cases;
  std::vector<std::string> dropped_variables;
  // Cases kept with at least one imputed weekday.
  std::vector<std::string> imputed_cases;
};

struct CodingResult {
  CodedMatrix coded;
  DropReport report;
};

/**
 * Event frequency table: rows are distinct case ids, columns distinct codes,
 * both sorted lexicographically; entries count in-window events. All-zero
 * rows and columns are removed and listed in the report.
 */
CodingResult code_events(std::span<const EventRecord> records,
                         const DateWindow& window);

// ln(ln(x + 1) + 1) + 1
double double_log(double x);

// Elementwise double_log. Throws InvalidInput on a negative entry.
CodedMatrix double_log_transform(CodedMatrix coded);

/**
 * Day-of-week consumption: one row per case and seven columns Mon..Sun, each
 * the mean daily total (sum of the 48 bins) over in-window dates on that
 * weekday. A weekday with no in-window dates takes the mean of the case's
 * observed weekdays and the case is listed as imputed; cases with no
 * in-window dates are dropped.
 */
CodingResult code_consumption(std::span<const ConsumptionRecord> records,
                              const DateWindow& window);

inline const std::array<std::string, 7>& weekday_names() {
  static const std::array<std::string, 7> names = {"Mon", "Tue", "Wed", "Thu",
                                                   "Fri", "Sat", "Sun"};
  return names;
}

enum class PartitionMode { kByType, kRandom };

struct PartitionSpec {
  PartitionMode mode = PartitionMode::kByType;
  int part_count = 2;
  std::uint64_t seed = 0;
};

/**
 * Seeded split of `variables` into `part_count` disjoint, exhaustive,
 * non-empty subsets whose sizes differ by at most one. Names inside each
 * subset keep their input order.
 *
 * Throws InvalidPartition if part_count < 2 or exceeds the variable count,
 * and InvalidInput if the mode is not random.
 */
std::vector<std::vector<std::string>> random_partition(
    std::span<const std::string> variables, const PartitionSpec& spec);

// Seeded injective map from nominal levels to reals in [0, 1).
// Throws InvalidInput on duplicate levels.
std::map<std::string, double> random_numeric_coding(
    std::span<const std::string> levels, std::uint64_t seed);

// Column subset, in the order given. Throws InvalidInput on unknown names.
CodedMatrix select_variables(const CodedMatrix& coded,
                             std::span<const std::string> names);

// Horizontal join on the case ids present in both inputs (sorted).
CodedMatrix join_on_cases(const CodedMatrix& a, const CodedMatrix& b);

}  // namespace jointrank

#endif  // JOINTRANK_CODING_HPP
