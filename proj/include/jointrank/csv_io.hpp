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

#ifndef JOINTRANK_CSV_IO_HPP
#define JOINTRANK_CSV_IO_HPP

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jointrank/coding.hpp"
#include "jointrank/distance.hpp"
#include "jointrank/joint.hpp"
#include "jointrank/ordination.hpp"

namespace jointrank {

// YYYY-MM-DD. Throws ParseError.
Date parse_date(std::string_view text);
std::string format_date(Date d);

// YYYY-MM-DDTHH:MM:SS (or a space instead of T) with an optional "Z" or
// +HH:MM / -HH:MM offset, converted to UTC. Throws ParseError.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

// Shortest decimal that round-trips.
std::string format_double(double x);

// Header `case_id,timestamp,code` required. Missing header or wrong field
// count -> FormatError(line); bad timestamp -> ParseError(line).
std::vector<EventRecord> parse_events_csv(const std::filesystem::path& path);
std::vector<EventRecord> parse_events_csv(std::istream& in);

// Header `case_id,date,b01,...,b48` required. Wrong field count ->
// FormatError(line); unparsable value -> ParseError(line); negative or
// non-finite bin -> ValueError(line).
std::vector<ConsumptionRecord> parse_consumption_csv(
    const std::filesystem::path& path);
std::vector<ConsumptionRecord> parse_consumption_csv(std::istream& in);

void write_events_csv(std::ostream& out, std::span<const EventRecord> records);
void write_consumption_csv(std::ostream& out,
                           std::span<const ConsumptionRecord> records);

// `case_id,<variable>...` followed by one labeled row per case.
void write_coded_csv(std::ostream& out, const CodedMatrix& coded);
CodedMatrix read_coded_csv(const std::filesystem::path& path,
                           CodingKind kind = CodingKind::kGeneric);

// Leading `dims` columns of F (`case_id,dim1,...`) or V (`variable,dim1,...`).
void write_row_coordinates_csv(std::ostream& out, const Ordination& ord,
                               Index dims);
void write_column_coordinates_csv(std::ostream& out, const Ordination& ord,
                                  Index dims);
void write_scree_csv(std::ostream& out, std::span<const ScreeEntry> entries);
void write_histogram_csv(std::ostream& out, const Histogram& h);

void write_distances_csv(std::ostream& out, const DistanceVector& d);
DistanceVector read_distances_csv(const std::filesystem::path& path);

// `case_id,rank_a,rank_b,density,z`
void write_joint_csv(std::ostream& out, const JointRankDensity& jrd);
// Restores the per-case columns only (no grid).
JointRankDensity read_joint_csv(const std::filesystem::path& path);

// Headerless, one matrix row per line.
void write_matrix_csv(std::ostream& out, const Matrix& m);

// Opens a file for writing, throwing IoError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace jointrank

#endif  // JOINTRANK_CSV_IO_HPP
