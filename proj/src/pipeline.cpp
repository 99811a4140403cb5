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

#include "jointrank/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <utility>

#include "jointrank/csv_io.hpp"
#include "jointrank/error.hpp"
#include "random_util.hpp"

namespace jointrank {

namespace {

const char* const kStageIngest = "ingest";
const char* const kStagePartition = "S1 partition";
const char* const kStageTransform = "S2 transform";
const char* const kStageDistance = "S3 distance";
const char* const kStageJoint = "S4 joint distance";
const char* const kStageDetect = "S5 detect";

template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

Error config_error(const std::string& what) {
  return Error(ErrorCode::kConfigError, what);
}

Date latest_date(const PipelineInputs& inputs) {
  std::optional<Date> latest;
  for (const auto& e : inputs.events) {
    const Date d = std::chrono::floor<std::chrono::days>(e.timestamp);
    if (!latest || d > *latest) latest = d;
  }
  for (const auto& c : inputs.consumption) {
    if (!latest || c.date > *latest) latest = c.date;
  }
  if (!latest) {
    throw Error(ErrorCode::kInvalidInput,
                "no records to infer an analysis window from");
  }
  return *latest;
}

DateWindow resolve_window(const PipelineConfig& config,
                          const PipelineInputs& inputs) {
  if (config.window_start && config.window_end) {
    return DateWindow(*config.window_start, *config.window_end);
  }
  if (config.window_start) return DateWindow::starting_at(*config.window_start);
  if (config.window_end) return DateWindow::ending_at(*config.window_end);
  return DateWindow::ending_at(latest_date(inputs));
}

struct PartitionRun {
  Ordination ordination;
  int k = 0;
  DistanceVector distances;
};

PartitionRun measure(Ordination ord, const StoppingRule& rule) {
  PartitionRun run;
  run.k = staged(kStageDistance, [&] { return select_components(ord, rule); });
  run.distances =
      staged(kStageDistance, [&] { return ordinal_distances(ord, run.k); });
  run.ordination = std::move(ord);
  return run;
}

JointRankDensity joint_of(const DistanceVector& a, const DistanceVector& b,
                          const PipelineConfig& config) {
  return staged(kStageJoint, [&] {
    const CommonCases common = align_common_cases(a, b);
    const auto ranks_a = mid_ranks(common.distances_a);
    const auto ranks_b = mid_ranks(common.distances_b);
    return joint_density(common.case_ids, ranks_a, ranks_b, config.grid_size,
                         config.bandwidth);
  });
}

void write_partition_artifacts(const std::filesystem::path& dir,
                               const std::string& name, const PartitionRun& run,
                               const PipelineConfig& config) {
  {
    auto out = open_output(dir / (name + "_scree.csv"));
    write_scree_csv(out, scree(run.ordination));
  }
  {
    auto out = open_output(dir / (name + "_distances.csv"));
    write_distances_csv(out, run.distances);
  }
  {
    auto out = open_output(dir / (name + "_distance_histogram.csv"));
    write_histogram_csv(out,
                        histogram(run.distances.distances, config.histogram_bins));
  }
  {
    auto out = open_output(dir / (name + "_biplot_rows.csv"));
    write_row_coordinates_csv(out, run.ordination, config.biplot_dims);
  }
  auto out = open_output(dir / (name + "_biplot_columns.csv"));
  write_column_coordinates_csv(out, run.ordination, config.biplot_dims);
}

void write_joint_artifacts(const std::filesystem::path& dir,
                           const JointRankDensity& jrd) {
  {
    auto out = open_output(dir / "joint.csv");
    write_joint_csv(out, jrd);
  }
  auto out = open_output(dir / "density_grid.csv");
  write_matrix_csv(out, jrd.z_scaled_grid());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string mode_name(PartitionMode mode) {
  return mode == PartitionMode::kByType ? "by-type" : "random";
}

nlohmann::json run_parameters(const PipelineConfig& config,
                              const DateWindow& window) {
  return {{"window_start", format_date(window.start())},
          {"window_end", format_date(window.end())},
          {"mode", mode_name(config.mode)},
          {"part_count", config.part_count},
          {"repetitions", config.repetitions},
          {"stopping_rule_a", config.event_rule.to_string()},
          {"stopping_rule_b", config.consumption_rule.to_string()},
          {"strategy", std::string(to_string(config.strategy))}};
}

PipelineResult run_by_type(const PipelineConfig& config,
                           const PipelineInputs& inputs,
                           const DateWindow& window) {
  staged(kStagePartition, [&] {
    if (inputs.events.empty() && inputs.consumption.empty()) {
      throw Error(ErrorCode::kInvalidInput, "both partitions are empty");
    }
    return 0;
  });

  CodingResult events = staged(kStageTransform, [&] {
    CodingResult r = code_events(inputs.events, window);
    r.coded = double_log_transform(std::move(r.coded));
    return r;
  });
  CodingResult consumption = staged(kStageTransform, [&] {
    return code_consumption(inputs.consumption, window);
  });

  Ordination event_ord = staged(kStageTransform, [&] {
    return ordinate_ca(events.coded, config.strategy);
  });
  Ordination consumption_ord =
      staged(kStageTransform, [&] { return ordinate_pca(consumption.coded); });

  PartitionRun a = measure(std::move(event_ord), config.event_rule);
  PartitionRun b = measure(std::move(consumption_ord), config.consumption_rule);

  JointRankDensity jrd = joint_of(a.distances, b.distances, config);

  AnomalyReport report = staged(kStageDetect, [&] {
    return detect_anomalies(jrd, DetectOptions{config.threshold,
                                               config.quadrant_filter,
                                               config.two_sided});
  });
  report.parameters.k_a = a.k;
  report.parameters.k_b = b.k;
  report.parameters.seed = config.seed;

  if (!config.output_dir.empty()) {
    staged(kStageDetect, [&] {
      const auto& dir = config.output_dir;
      std::filesystem::create_directories(dir);
      write_partition_artifacts(dir, "events", a, config);
      write_partition_artifacts(dir, "consumption", b, config);
      write_joint_artifacts(dir, jrd);
      {
        auto out = open_output(dir / "dropped.csv");
        out << "partition,kind,id\n";
        for (const auto& id : events.report.dropped_cases) {
          out << "events,case," << id << '\n';
        }
        for (const auto& id : events.report.dropped_variables) {
          out << "events,variable," << id << '\n';
        }
        for (const auto& id : consumption.report.dropped_cases) {
          out << "consumption,case," << id << '\n';
        }
        for (const auto& id : consumption.report.imputed_cases) {
          out << "consumption,imputed," << id << '\n';
        }
      }
      nlohmann::json counts = {
          {"cases_a", a.distances.case_ids.size()},
          {"cases_b", b.distances.case_ids.size()},
          {"variables_a", events.coded.variable_names.size()},
          {"variables_b", consumption.coded.variable_names.size()},
          {"dropped_cases_a", events.report.dropped_cases.size()},
          {"dropped_variables_a", events.report.dropped_variables.size()},
          {"dropped_cases_b", consumption.report.dropped_cases.size()},
          {"imputed_cases_b", consumption.report.imputed_cases.size()}};
      write_json(dir / "report.json",
                 report_to_json(report, run_parameters(config, window), counts));
      return 0;
    });
  }

  PipelineResult result{std::move(report), window, {}, std::move(jrd)};
  result.partitions.push_back({"events", std::move(a.ordination),
                               std::move(a.distances), std::move(events.report)});
  result.partitions.push_back({"consumption", std::move(b.ordination),
                               std::move(b.distances),
                               std::move(consumption.report)});
  return result;
}

// Experimental bootstrapped mode: per-case z-scores are averaged over all
// part pairs of all repetitions and detection runs on the mean.
PipelineResult run_random(const PipelineConfig& config,
                          const PipelineInputs& inputs,
                          const DateWindow& window) {
  CodedMatrix joined = staged(kStageTransform, [&] {
    CodingResult events = code_events(inputs.events, window);
    events.coded = double_log_transform(std::move(events.coded));
    CodingResult consumption = code_consumption(inputs.consumption, window);
    return join_on_cases(events.coded, consumption.coded);
  });

  // PCA needs non-constant columns on the common case set.
  std::vector<std::string> variables;
  std::vector<std::string> constant;
  for (Index j = 0; j < joined.cols(); ++j) {
    const auto col = joined.matrix.col(j);
    if (col.size() > 0 && (col.array() != col[0]).any()) {
      variables.push_back(joined.variable_names[j]);
    } else {
      constant.push_back(joined.variable_names[j]);
    }
  }

  std::vector<JointRankDensity> runs;
  nlohmann::json partitions = nlohmann::json::array();
  std::vector<int> ks;
  for (int rep = 0; rep < config.repetitions; ++rep) {
    const PartitionSpec spec{PartitionMode::kRandom, config.part_count,
                             internal::mix_seed(config.seed, rep)};
    const auto parts =
        staged(kStagePartition, [&] { return random_partition(variables, spec); });
    std::vector<DistanceVector> distances;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      Ordination ord = staged(kStageTransform, [&] {
        return ordinate_pca(select_variables(joined, parts[p]));
      });
      const StoppingRule& rule = p == 0 ? config.event_rule : config.consumption_rule;
      PartitionRun run = measure(std::move(ord), rule);
      ks.push_back(run.k);
      distances.push_back(std::move(run.distances));
      partitions.push_back({{"repetition", rep}, {"part", p}, {"variables", parts[p]}});
    }
    for (std::size_t x = 0; x < distances.size(); ++x) {
      for (std::size_t y = x + 1; y < distances.size(); ++y) {
        runs.push_back(joint_of(distances[x], distances[y], config));
      }
    }
  }

  JointRankDensity jrd =
      staged(kStageJoint, [&] { return average_repetitions(runs); });
  AnomalyReport report = staged(kStageDetect, [&] {
    return detect_anomalies(jrd, DetectOptions{config.threshold,
                                               config.quadrant_filter,
                                               config.two_sided});
  });
  report.parameters.k_a = ks.size() > 0 ? ks[0] : 0;
  report.parameters.k_b = ks.size() > 1 ? ks[1] : 0;
  report.parameters.seed = config.seed;

  if (!config.output_dir.empty()) {
    staged(kStageDetect, [&] {
      const auto& dir = config.output_dir;
      std::filesystem::create_directories(dir);
      write_joint_artifacts(dir, jrd);
      write_json(dir / "partitions.json", partitions);
      nlohmann::json params = run_parameters(config, window);
      params["k_by_part"] = ks;
      params["experimental"] = "z-scores averaged over random partitions";
      nlohmann::json counts = {{"variables", variables.size()},
                               {"constant_variables_dropped", constant.size()},
                               {"joint_runs", runs.size()}};
      write_json(dir / "report.json", report_to_json(report, params, counts));
      return 0;
    });
  }
  return PipelineResult{std::move(report), window, {}, std::move(jrd)};
}

}  // namespace

void PipelineConfig::validate(bool require_paths) const {
  if (require_paths && (event_input.empty() || consumption_input.empty())) {
    throw config_error("event_input and consumption_input are required");
  }
  if (repetitions < 1) throw config_error("repetitions must be >= 1");
  if (part_count < 2) throw config_error("part_count must be >= 2");
  if (mode == PartitionMode::kByType && part_count != 2) {
    throw config_error("by-type mode has exactly 2 partitions");
  }
  if (!std::isfinite(threshold)) throw config_error("threshold must be finite");
  if (grid_size < kMinGridSize) {
    throw config_error("grid_size must be >= " + std::to_string(kMinGridSize));
  }
  if (bandwidth && !(*bandwidth > 0.0 && std::isfinite(*bandwidth))) {
    throw config_error("bandwidth must be positive");
  }
  if (quadrant_filter && !(*quadrant_filter >= 0.0 && *quadrant_filter < 1.0)) {
    throw config_error("quadrant_filter must be in [0, 1)");
  }
  if (window_start && window_end && *window_start > *window_end) {
    throw config_error("window_start is after window_end");
  }
  if (histogram_bins < 1) throw config_error("histogram_bins must be >= 1");
  if (biplot_dims < 1) throw config_error("biplot_dims must be >= 1");
}

PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  PipelineConfig c = std::move(base);
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "event_input") {
        c.event_input = value.get<std::string>();
      } else if (key == "consumption_input") {
        c.consumption_input = value.get<std::string>();
      } else if (key == "output_dir") {
        c.output_dir = value.get<std::string>();
      } else if (key == "window_start") {
        c.window_start = parse_date(value.get<std::string>());
      } else if (key == "window_end") {
        c.window_end = parse_date(value.get<std::string>());
      } else if (key == "stopping_rule") {
        c.event_rule = c.consumption_rule =
            StoppingRule::parse(value.get<std::string>());
      } else if (key == "stopping_rule_a") {
        c.event_rule = StoppingRule::parse(value.get<std::string>());
      } else if (key == "stopping_rule_b") {
        c.consumption_rule = StoppingRule::parse(value.get<std::string>());
      } else if (key == "bandwidth") {
        if (value.is_null()) {
          c.bandwidth.reset();
        } else {
          c.bandwidth = value.get<double>();
        }
      } else if (key == "grid_size") {
        c.grid_size = value.get<int>();
      } else if (key == "threshold") {
        c.threshold = value.get<double>();
      } else if (key == "quadrant_filter") {
        if (value.is_null()) {
          c.quadrant_filter.reset();
        } else {
          c.quadrant_filter = value.get<double>();
        }
      } else if (key == "two_sided") {
        c.two_sided = value.get<bool>();
      } else if (key == "mode") {
        const auto mode = value.get<std::string>();
        if (mode == "by-type") {
          c.mode = PartitionMode::kByType;
        } else if (mode == "random") {
          c.mode = PartitionMode::kRandom;
        } else {
          throw config_error("mode must be 'by-type' or 'random'");
        }
      } else if (key == "part_count") {
        c.part_count = value.get<int>();
      } else if (key == "repetitions") {
        c.repetitions = value.get<int>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "strategy") {
        const auto s = value.get<std::string>();
        if (s == "full") {
          c.strategy = ScalingStrategy::kFullDiagonal;
        } else if (s == "sparse") {
          c.strategy = ScalingStrategy::kSparseDiagonal;
        } else if (s == "vectorized") {
          c.strategy = ScalingStrategy::kVectorized;
        } else {
          throw config_error("strategy must be full, sparse or vectorized");
        }
      } else if (key == "histogram_bins") {
        c.histogram_bins = value.get<int>();
      } else if (key == "biplot_dims") {
        c.biplot_dims = value.get<int>();
      } else {
        throw config_error("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad config value: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw;
    throw config_error(e.detail());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j = {
      {"event_input", c.event_input.string()},
      {"consumption_input", c.consumption_input.string()},
      {"output_dir", c.output_dir.string()},
      {"stopping_rule_a", c.event_rule.to_string()},
      {"stopping_rule_b", c.consumption_rule.to_string()},
      {"bandwidth", optional_json(c.bandwidth)},
      {"grid_size", c.grid_size},
      {"threshold", c.threshold},
      {"quadrant_filter", optional_json(c.quadrant_filter)},
      {"two_sided", c.two_sided},
      {"mode", mode_name(c.mode)},
      {"part_count", c.part_count},
      {"repetitions", c.repetitions},
      {"seed", c.seed},
      {"strategy", std::string(to_string(c.strategy))},
      {"histogram_bins", c.histogram_bins},
      {"biplot_dims", c.biplot_dims}};
  if (c.window_start) j["window_start"] = format_date(*c.window_start);
  if (c.window_end) j["window_end"] = format_date(*c.window_end);
  return j;
}

nlohmann::json report_to_json(const AnomalyReport& report,
                              const nlohmann::json& extra_parameters,
                              const nlohmann::json& extra_counts) {
  const auto& p = report.parameters;
  nlohmann::json parameters = {{"k_a", p.k_a},
                               {"k_b", p.k_b},
                               {"bandwidth", p.bandwidth},
                               {"grid_size", p.grid_size},
                               {"seed", p.seed},
                               {"threshold", p.threshold},
                               {"quadrant_filter", optional_json(p.quadrant_filter)},
                               {"two_sided", p.two_sided}};
  if (extra_parameters.is_object()) parameters.update(extra_parameters);

  nlohmann::json counts = {{"total_cases", report.total_cases},
                           {"flagged", report.flagged.size()}};
  if (extra_counts.is_object()) counts.update(extra_counts);

  nlohmann::json flagged = nlohmann::json::array();
  for (const auto& f : report.flagged) {
    flagged.push_back({{"case_id", f.case_id},
                       {"rank_a", f.rank_a},
                       {"rank_b", f.rank_b},
                       {"z", f.z}});
  }
  return {{"parameters", std::move(parameters)},
          {"counts", std::move(counts)},
          {"flagged", std::move(flagged)}};
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            const PipelineInputs& inputs) {
  config.validate(false);
  const DateWindow window =
      staged(kStagePartition, [&] { return resolve_window(config, inputs); });
  if (config.mode == PartitionMode::kRandom) {
    return run_random(config, inputs, window);
  }
  return run_by_type(config, inputs, window);
}

AnomalyReport run_pipeline(const PipelineConfig& config) {
  config.validate(true);
  PipelineInputs inputs;
  inputs.events =
      staged(kStageIngest, [&] { return parse_events_csv(config.event_input); });
  inputs.consumption = staged(kStageIngest, [&] {
    return parse_consumption_csv(config.consumption_input);
  });
  return run_pipeline(config, inputs).report;
}

}  // namespace jointrank
