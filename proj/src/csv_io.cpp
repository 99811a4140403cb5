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

#include "jointrank/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "jointrank/error.hpp"

namespace jointrank {

namespace {

constexpr std::size_t kConsumptionFields = 2 + kBinsPerDay;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_uint(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char ch : text) {
    if (ch < '0' || ch > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_real(std::string_view text, double& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::optional<Date> try_parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  int mo = 0;
  int d = 0;
  if (!parse_uint(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), mo) ||
      !parse_uint(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::optional<Timestamp> try_parse_timestamp(std::string_view text) {
  if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  const auto date = try_parse_date(text.substr(0, 10));
  int hh = 0;
  int mm = 0;
  int ss = 0;
  if (!date || !parse_uint(text.substr(11, 2), hh) ||
      !parse_uint(text.substr(14, 2), mm) ||
      !parse_uint(text.substr(17, 2), ss) || hh > 23 || mm > 59 || ss > 59) {
    return std::nullopt;
  }
  std::string_view rest = text.substr(19);
  if (!rest.empty() && rest.front() == '.') {
    std::size_t n = 1;
    while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
    if (n == 1) return std::nullopt;
    rest.remove_prefix(n);
  }
  int offset_minutes = 0;
  if (rest == "Z" || rest.empty()) {
    offset_minutes = 0;
  } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') &&
             rest[3] == ':') {
    int oh = 0;
    int om = 0;
    if (!parse_uint(rest.substr(1, 2), oh) || !parse_uint(rest.substr(4, 2), om) ||
        oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset_minutes = (rest[0] == '+' ? 1 : -1) * (oh * 60 + om);
  } else {
    return std::nullopt;
  }
  using namespace std::chrono;
  return Timestamp{*date} + hours{hh} + minutes{mm} + seconds{ss} -
         minutes{offset_minutes};
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  return in;
}

std::string line_tag(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

template <class Header>
void expect_header(std::istream& in, std::string& line, const Header& expected,
                   std::string_view what) {
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kFormatError,
                std::string(what) + " file is empty (header required)", 1);
  }
  strip_cr(line);
  if (!line.empty() && static_cast<unsigned char>(line[0]) == 0xEF) {
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  }
  if (line != expected) {
    throw Error(ErrorCode::kFormatError,
                line_tag(1) + "expected header '" + std::string(expected) + "'",
                1);
  }
}

std::string consumption_header() {
  std::string header = "case_id,date";
  char buf[8];
  for (int b = 1; b <= kBinsPerDay; ++b) {
    std::snprintf(buf, sizeof(buf), ",b%02d", b);
    header += buf;
  }
  return header;
}

void write_labeled_row(std::ostream& out, const std::string& label,
                       const Matrix& m, Index row, Index dims) {
  out << label;
  for (Index j = 0; j < dims; ++j) out << ',' << format_double(m(row, j));
  out << '\n';
}

}  // namespace

Date parse_date(std::string_view text) {
  auto d = try_parse_date(text);
  if (!d) {
    throw Error(ErrorCode::kParseError,
                "invalid date '" + std::string(text) + "' (want YYYY-MM-DD)");
  }
  return *d;
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  auto t = try_parse_timestamp(text);
  if (!t) {
    throw Error(ErrorCode::kParseError,
                "invalid timestamp '" + std::string(text) + "'");
  }
  return *t;
}

std::string format_timestamp(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::hh_mm_ss tod{t - day};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "T%02d:%02d:%02dZ",
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return format_date(day) + buf;
}

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<EventRecord> parse_events_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_events_csv(in);
}

std::vector<EventRecord> parse_events_csv(std::istream& in) {
  std::string line;
  expect_header(in, line, std::string_view("case_id,timestamp,code"), "events");
  std::vector<EventRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 3) {
      throw Error(ErrorCode::kFormatError,
                  line_tag(line_no) + "expected 3 fields, found " +
                      std::to_string(fields.size()),
                  line_no);
    }
    if (fields[0].empty() || fields[2].empty()) {
      throw Error(ErrorCode::kFormatError,
                  line_tag(line_no) + "case_id and code must be non-empty",
                  line_no);
    }
    const auto ts = try_parse_timestamp(fields[1]);
    if (!ts) {
      throw Error(ErrorCode::kParseError,
                  line_tag(line_no) + "invalid timestamp '" +
                      std::string(fields[1]) + "'",
                  line_no);
    }
    records.push_back(
        EventRecord{std::string(fields[0]), *ts, std::string(fields[2])});
  }
  return records;
}

std::vector<ConsumptionRecord> parse_consumption_csv(
    const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_consumption_csv(in);
}

std::vector<ConsumptionRecord> parse_consumption_csv(std::istream& in) {
  std::string line;
  expect_header(in, line, consumption_header(), "consumption");
  std::vector<ConsumptionRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != kConsumptionFields) {
      throw Error(ErrorCode::kFormatError,
                  line_tag(line_no) + "expected " +
                      std::to_string(kConsumptionFields) + " fields, found " +
                      std::to_string(fields.size()),
                  line_no);
    }
    if (fields[0].empty()) {
      throw Error(ErrorCode::kFormatError,
                  line_tag(line_no) + "case_id must be non-empty", line_no);
    }
    ConsumptionRecord rec;
    rec.case_id = std::string(fields[0]);
    const auto date = try_parse_date(fields[1]);
    if (!date) {
      throw Error(ErrorCode::kParseError,
                  line_tag(line_no) + "invalid date '" +
                      std::string(fields[1]) + "'",
                  line_no);
    }
    rec.date = *date;
    for (int b = 0; b < kBinsPerDay; ++b) {
      double value = 0.0;
      if (!parse_real(fields[2 + b], value)) {
        throw Error(ErrorCode::kParseError,
                    line_tag(line_no) + "invalid number '" +
                        std::string(fields[2 + b]) + "'",
                    line_no);
      }
      if (!std::isfinite(value) || value < 0.0) {
        throw Error(ErrorCode::kValueError,
                    line_tag(line_no) + "bin " + std::to_string(b + 1) +
                        " must be a non-negative finite kWh value",
                    line_no);
      }
      rec.bins[b] = value;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_events_csv(std::ostream& out, std::span<const EventRecord> records) {
  out << "case_id,timestamp,code\n";
  for (const auto& r : records) {
    out << r.case_id << ',' << format_timestamp(r.timestamp) << ',' << r.code
        << '\n';
  }
}

void write_consumption_csv(std::ostream& out,
                           std::span<const ConsumptionRecord> records) {
  out << consumption_header() << '\n';
  for (const auto& r : records) {
    out << r.case_id << ',' << format_date(r.date);
    for (double b : r.bins) out << ',' << format_double(b);
    out << '\n';
  }
}

void write_coded_csv(std::ostream& out, const CodedMatrix& coded) {
  out << "case_id";
  for (const auto& name : coded.variable_names) out << ',' << name;
  out << '\n';
  for (Index i = 0; i < coded.rows(); ++i) {
    write_labeled_row(out, coded.case_ids[i], coded.matrix, i, coded.cols());
  }
}

CodedMatrix read_coded_csv(const std::filesystem::path& path, CodingKind kind) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kFormatError, "matrix file is empty", 1);
  }
  strip_cr(line);
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "case_id") {
    throw Error(ErrorCode::kFormatError,
                "line 1: expected 'case_id,<variable>...' header", 1);
  }
  CodedMatrix coded;
  coded.kind = kind;
  for (std::size_t j = 1; j < header.size(); ++j) {
    coded.variable_names.emplace_back(header[j]);
  }
  const std::size_t cols = coded.variable_names.size();
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != cols + 1) {
      throw Error(ErrorCode::kFormatError,
                  line_tag(line_no) + "field count does not match header",
                  line_no);
    }
    coded.case_ids.emplace_back(fields[0]);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_real(fields[j], v)) {
        throw Error(ErrorCode::kParseError,
                    line_tag(line_no) + "invalid number '" +
                        std::string(fields[j]) + "'",
                    line_no);
      }
      values.push_back(v);
    }
  }
  const auto rows = static_cast<Index>(coded.case_ids.size());
  coded.matrix.resize(rows, static_cast<Index>(cols));
  for (Index i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      coded.matrix(i, static_cast<Index>(j)) =
          values[static_cast<std::size_t>(i) * cols + j];
    }
  }
  return coded;
}

void write_row_coordinates_csv(std::ostream& out, const Ordination& ord,
                               Index dims) {
  dims = std::min(dims, ord.f.cols());
  out << "case_id";
  for (Index j = 0; j < dims; ++j) out << ",dim" << j + 1;
  out << '\n';
  for (Index i = 0; i < ord.f.rows(); ++i) {
    write_labeled_row(out, ord.case_ids[i], ord.f, i, dims);
  }
}

void write_column_coordinates_csv(std::ostream& out, const Ordination& ord,
                                  Index dims) {
  dims = std::min(dims, ord.v.cols());
  out << "variable";
  for (Index j = 0; j < dims; ++j) out << ",dim" << j + 1;
  out << '\n';
  for (Index i = 0; i < ord.v.rows(); ++i) {
    write_labeled_row(out, ord.variable_names[i], ord.v, i, dims);
  }
}

void write_scree_csv(std::ostream& out, std::span<const ScreeEntry> entries) {
  out << "component,eigenvalue,cumulative_fraction\n";
  for (const auto& e : entries) {
    out << e.component << ',' << format_double(e.eigenvalue) << ','
        << format_double(e.cumulative_fraction) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_lower,bin_upper,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1])
        << ',' << h.counts[b] << '\n';
  }
}

void write_distances_csv(std::ostream& out, const DistanceVector& d) {
  out << "case_id,distance\n";
  for (std::size_t i = 0; i < d.case_ids.size(); ++i) {
    out << d.case_ids[i] << ',' << format_double(d.distances[i]) << '\n';
  }
}

DistanceVector read_distances_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  expect_header(in, line, std::string_view("case_id,distance"), "distance");
  DistanceVector d;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    double v = 0.0;
    if (fields.size() != 2 || !parse_real(fields[1], v)) {
      throw Error(ErrorCode::kFormatError,
                  line_tag(line_no) + "expected 'case_id,distance'", line_no);
    }
    d.case_ids.emplace_back(fields[0]);
    d.distances.push_back(v);
  }
  return d;
}

void write_joint_csv(std::ostream& out, const JointRankDensity& jrd) {
  out << "case_id,rank_a,rank_b,density,z\n";
  for (std::size_t i = 0; i < jrd.cases(); ++i) {
    out << jrd.case_ids[i] << ',' << format_double(jrd.rank_a[i]) << ','
        << format_double(jrd.rank_b[i]) << ',' << format_double(jrd.density[i])
        << ',' << format_double(jrd.z_score[i]) << '\n';
  }
}

JointRankDensity read_joint_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  expect_header(in, line, std::string_view("case_id,rank_a,rank_b,density,z"),
                "joint");
  JointRankDensity jrd;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    double v[4];
    bool ok = fields.size() == 5;
    for (int k = 0; ok && k < 4; ++k) ok = parse_real(fields[1 + k], v[k]);
    if (!ok) {
      throw Error(ErrorCode::kFormatError,
                  line_tag(line_no) + "expected 'case_id,rank_a,rank_b,density,z'",
                  line_no);
    }
    jrd.case_ids.emplace_back(fields[0]);
    jrd.rank_a.push_back(v[0]);
    jrd.rank_b.push_back(v[1]);
    jrd.density.push_back(v[2]);
    jrd.z_score.push_back(v[3]);
  }
  return jrd;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                "cannot open '" + path.string() + "' for writing");
  }
  return out;
}

}  // namespace jointrank
