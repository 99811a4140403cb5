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

#ifndef JOINTRANK_PIPELINE_HPP
#define JOINTRANK_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jointrank/coding.hpp"
#include "jointrank/distance.hpp"
#include "jointrank/joint.hpp"
#include "jointrank/linalg.hpp"
#include "jointrank/ordination.hpp"

namespace jointrank {

/**
 * Settings for one end-to-end run. Partition "a" is always the event data
 * (double-log counts, CA) and "b" the day-of-week consumption (PCA). In
 * random mode both are joined on common cases, the variables are split at
 * random `repetitions` times and every part is ordinated by PCA.
 */
struct PipelineConfig {
  std::filesystem::path event_input;
  std::filesystem::path consumption_input;
  std::filesystem::path output_dir;  // empty: no artifacts

  // Missing ends default to a three-month window ending at the latest date
  // in the data (or starting at window_start).
  std::optional<Date> window_start;
  std::optional<Date> window_end;

  StoppingRule event_rule;
  StoppingRule consumption_rule;
  std::optional<double> bandwidth;  // default m / 50
  int grid_size = kDefaultGridSize;
  double threshold = kDefaultThreshold;
  std::optional<double> quadrant_filter;
  bool two_sided = false;

  PartitionMode mode = PartitionMode::kByType;
  int part_count = 2;
  int repetitions = 1;
  std::uint64_t seed = 0;

  ScalingStrategy strategy = ScalingStrategy::kVectorized;
  int histogram_bins = 50;
  int biplot_dims = 2;

  // Throws ConfigError.
  void validate(bool require_paths = true) const;
};

// Reads the keys documented in README.md; unknown keys are a ConfigError.
PipelineConfig config_from_json(const nlohmann::json& j,
                                PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const PipelineConfig& config);

struct PipelineInputs {
  std::vector<EventRecord> events;
  std::vector<ConsumptionRecord> consumption;
};

// Partition-level output kept for inspection and tests.
struct PartitionSummary {
  std::string name;
  Ordination ordination;
  DistanceVector distances;
  DropReport dropped;
};

struct PipelineResult {
  AnomalyReport report;
  DateWindow window;
  std::vector<PartitionSummary> partitions;  // by-type mode: {events, consumption}
  JointRankDensity joint;
};

// Runs S1-S5 on in-memory records and writes artifacts when
// config.output_dir is set. Errors carry the stage tag.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const PipelineInputs& inputs);

// Parses the two input files, then runs the above.
AnomalyReport run_pipeline(const PipelineConfig& config);

// {parameters, counts, flagged: [{case_id, rank_a, rank_b, z}]}
nlohmann::json report_to_json(const AnomalyReport& report,
                              const nlohmann::json& extra_parameters = {},
                              const nlohmann::json& extra_counts = {});

}  // namespace jointrank

#endif  // JOINTRANK_PIPELINE_HPP
