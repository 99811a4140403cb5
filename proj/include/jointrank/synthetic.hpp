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

#ifndef JOINTRANK_SYNTHETIC_HPP
#define JOINTRANK_SYNTHETIC_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "jointrank/coding.hpp"

namespace jointrank {

// Which partitions carry the planted anomaly signal.
enum class PlantedIn { kBoth, kEventsOnly, kConsumptionOnly };

/**
 * Parameters of the labeled synthetic meter portfolio.
 *
 * Background cases draw a Poisson(event_rate) number of events from one
 * shared code distribution (a Dirichlet(code_concentration) draw) and daily
 * consumption from a shared weekly profile scaled by a log-normal per-case
 * level with log-normal day noise. Anomalous cases send
 * `anomaly_code_share` of their events to `anomaly_codes` codes that are rare
 * in the background, and follow `anomaly_profile` scaled by
 * `anomaly_level` instead of `weekly_profile`.
 */
struct SyntheticSpec {
  std::size_t cases = 1000;
  std::size_t codes = 200;
  double anomaly_fraction = 0.02;

  double event_rate = 50.0;
  double code_concentration = 0.5;
  std::size_t anomaly_codes = 8;
  double anomaly_code_share = 0.5;

  double consumption_mean = 12.0;  // kWh per day
  double consumption_level_sd = 0.2;
  double consumption_noise = 0.15;
  std::array<double, 7> weekly_profile = {1.0, 1.0, 1.0, 1.0, 1.0, 0.8, 0.75};
  std::array<double, 7> anomaly_profile = {0.55, 0.55, 0.55, 0.55, 0.55, 1.5,
                                           1.6};
  double anomaly_level = 4.0;  // multiplies the anomalous daily level

  PlantedIn planted_in = PlantedIn::kBoth;
  Date start = Date{std::chrono::year{2024} / 1 / 1};
  int days = 28;
  std::uint64_t seed = 1;

  // floor(anomaly_fraction * cases)
  std::size_t anomaly_count() const;
  // Throws ConfigError unless cases >= 100, codes >= 2,
  // 0 <= anomaly_fraction < 0.5, days >= 1 and rates and levels are positive.
  void validate() const;
};

struct SyntheticData {
  std::vector<EventRecord> events;
  std::vector<ConsumptionRecord> consumption;
  std::vector<std::string> case_ids;
  std::vector<bool> is_anomaly;  // parallel to case_ids

  std::vector<std::string> anomalous_ids() const;
};

// Deterministic for a given spec (including the seed).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

// Writes events.csv, consumption.csv and labels.csv (`case_id,label`).
void write_synthetic(const SyntheticData& data,
                     const std::filesystem::path& dir);

}  // namespace jointrank

#endif  // JOINTRANK_SYNTHETIC_HPP
