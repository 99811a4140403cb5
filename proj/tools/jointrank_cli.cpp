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

// Command-line front end: one subcommand per pipeline stage plus `pipeline`
// for the whole run, `synth` for labeled test data and `bench` for the
// scaling-strategy timings.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jointrank/bench.hpp"
#include "jointrank/coding.hpp"
#include "jointrank/csv_io.hpp"
#include "jointrank/distance.hpp"
#include "jointrank/error.hpp"
#include "jointrank/joint.hpp"
#include "jointrank/ordination.hpp"
#include "jointrank/pipeline.hpp"
#include "jointrank/synthetic.hpp"

namespace fs = std::filesystem;
using namespace jointrank;

namespace {

struct WindowArgs {
  std::string start;
  std::string end;

  void add_to(CLI::App* app) {
    app->add_option("--window-start", start, "First day of the window (YYYY-MM-DD)");
    app->add_option("--window-end", end, "Last day of the window (YYYY-MM-DD)");
  }

  template <class Records, class DateOf>
  DateWindow resolve(const Records& records, DateOf date_of) const {
    if (!start.empty() && !end.empty()) {
      return DateWindow(parse_date(start), parse_date(end));
    }
    if (!start.empty()) return DateWindow::starting_at(parse_date(start));
    if (!end.empty()) return DateWindow::ending_at(parse_date(end));
    std::optional<Date> latest;
    for (const auto& r : records) {
      const Date d = date_of(r);
      if (!latest || d > *latest) latest = d;
    }
    if (!latest) {
      throw Error(ErrorCode::kInvalidInput, "no records to infer a window from");
    }
    return DateWindow::ending_at(*latest);
  }
};

ScalingStrategy parse_strategy(const std::string& s) {
  if (s == "full") return ScalingStrategy::kFullDiagonal;
  if (s == "sparse") return ScalingStrategy::kSparseDiagonal;
  if (s == "vectorized") return ScalingStrategy::kVectorized;
  throw Error(ErrorCode::kConfigError, "strategy must be full, sparse or vectorized");
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void print_drops(const DropReport& report) {
  std::cerr << "dropped cases: " << report.dropped_cases.size()
            << ", dropped variables: " << report.dropped_variables.size()
            << ", imputed cases: " << report.imputed_cases.size() << '\n';
}

void write_drops(const fs::path& path, const DropReport& report) {
  auto out = open_output(path);
  out << "kind,id\n";
  for (const auto& id : report.dropped_cases) out << "case," << id << '\n';
  for (const auto& id : report.dropped_variables) out << "variable," << id << '\n';
  for (const auto& id : report.imputed_cases) out << "imputed," << id << '\n';
}

std::vector<double> json_vector(const nlohmann::json& j, const char* key) {
  return j.at(key).get<std::vector<double>>();
}

// Rebuilds an ordination from `ordinate` output (coordinates only).
Ordination load_ordination(const fs::path& dir) {
  const nlohmann::json meta = read_json_file(dir / "ordination.json");
  Ordination ord;
  try {
    ord.method = meta.at("method").get<std::string>() == "CA"
                     ? OrdinationMethod::kCA
                     : OrdinationMethod::kPCA;
    const auto sv = json_vector(meta, "singular_values");
    const auto ev = json_vector(meta, "eigenvalues");
    const auto vf = json_vector(meta, "variance_fraction");
    ord.singular_values = Eigen::Map<const Vector>(sv.data(), Index(sv.size()));
    ord.eigenvalues = Eigen::Map<const Vector>(ev.data(), Index(ev.size()));
    ord.variance_fraction = Eigen::Map<const Vector>(vf.data(), Index(vf.size()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("ordination.json: ") + e.what());
  }
  CodedMatrix rows = read_coded_csv(dir / "rows.csv");
  ord.f = std::move(rows.matrix);
  ord.case_ids = std::move(rows.case_ids);
  return ord;
}

int run_synth(const SyntheticSpec& spec, const fs::path& out, const std::string& planted) {
  SyntheticSpec s = spec;
  if (planted == "both") {
    s.planted_in = PlantedIn::kBoth;
  } else if (planted == "events") {
    s.planted_in = PlantedIn::kEventsOnly;
  } else if (planted == "consumption") {
    s.planted_in = PlantedIn::kConsumptionOnly;
  } else {
    throw Error(ErrorCode::kConfigError, "--planted must be both, events or consumption");
  }
  const SyntheticData data = generate_synthetic(s);
  write_synthetic(data, out);
  std::cerr << "wrote " << data.case_ids.size() << " cases ("
            << s.anomaly_count() << " anomalous), " << data.events.size()
            << " events, " << data.consumption.size() << " consumption days to "
            << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint-rank anomaly detection for partitioned cases-by-variables data"};
  app.require_subcommand(1);

  // synth
  SyntheticSpec synth_spec;
  std::string synth_out;
  std::string synth_planted = "both";
  std::string synth_start;
  auto* synth = app.add_subcommand("synth", "Generate labeled synthetic meter data");
  synth->add_option("--cases", synth_spec.cases, "Number of cases (>= 100)");
  synth->add_option("--codes", synth_spec.codes, "Number of event codes");
  synth->add_option("--phi", synth_spec.anomaly_fraction, "Anomalous fraction in [0, 0.5)");
  synth->add_option("--event-rate", synth_spec.event_rate, "Mean events per case");
  synth->add_option("--anomaly-share", synth_spec.anomaly_code_share,
                    "Share of anomalous events sent to rare codes");
  synth->add_option("--anomaly-level", synth_spec.anomaly_level,
                    "Daily level multiplier for anomalous cases");
  synth->add_option("--level-sd", synth_spec.consumption_level_sd,
                    "Log-normal sd of the per-case consumption level");
  synth->add_option("--days", synth_spec.days, "Days of data per case");
  synth->add_option("--start", synth_start, "First date (YYYY-MM-DD)");
  synth->add_option("--planted", synth_planted, "both | events | consumption");
  synth->add_option("--seed", synth_spec.seed, "Random seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  // code-events
  std::string ce_events;
  std::string ce_out;
  std::string ce_drops;
  bool ce_double_log = false;
  WindowArgs ce_window;
  auto* code_ev = app.add_subcommand("code-events", "Event frequency coding");
  code_ev->add_option("--events", ce_events, "Events CSV")->required();
  code_ev->add_flag("--double-log", ce_double_log, "Apply ln(ln(x+1)+1)+1");
  code_ev->add_option("--drop-report", ce_drops, "Write dropped ids here");
  code_ev->add_option("--out", ce_out, "Output matrix CSV")->required();
  ce_window.add_to(code_ev);

  // code-consumption
  std::string cc_input;
  std::string cc_out;
  std::string cc_drops;
  WindowArgs cc_window;
  auto* code_co = app.add_subcommand("code-consumption", "Day-of-week consumption coding");
  code_co->add_option("--consumption", cc_input, "Consumption CSV")->required();
  code_co->add_option("--drop-report", cc_drops, "Write dropped/imputed ids here");
  code_co->add_option("--out", cc_out, "Output matrix CSV")->required();
  cc_window.add_to(code_co);

  // ordinate
  std::string or_input;
  std::string or_method = "ca";
  std::string or_strategy = "vectorized";
  std::string or_out;
  auto* ordinate = app.add_subcommand("ordinate", "CA or PCA of a coded matrix");
  ordinate->add_option("--input", or_input, "Coded matrix CSV")->required();
  ordinate->add_option("--method", or_method, "ca | pca");
  ordinate->add_option("--strategy", or_strategy, "full | sparse | vectorized (CA only)");
  ordinate->add_option("--out", or_out, "Output directory")->required();

  // distances
  std::string di_ord;
  std::string di_rule = "kaiser";
  std::string di_out;
  std::string di_hist;
  int di_bins = 50;
  auto* distances = app.add_subcommand("distances", "Stopping rule and ordinal distances");
  distances->add_option("--ordination", di_ord, "Directory written by `ordinate`")->required();
  distances->add_option("--rule", di_rule, "kaiser | <k> | var:<fraction>");
  distances->add_option("--out", di_out, "Output distances CSV")->required();
  distances->add_option("--histogram", di_hist, "Also write a histogram CSV");
  distances->add_option("--bins", di_bins, "Histogram bins");

  // joint
  std::string jo_a;
  std::string jo_b;
  std::string jo_out;
  int jo_grid = kDefaultGridSize;
  std::optional<double> jo_bandwidth;
  auto* joint = app.add_subcommand("joint", "Joint rank density of two distance files");
  joint->add_option("--a", jo_a, "First distances CSV")->required();
  joint->add_option("--b", jo_b, "Second distances CSV")->required();
  joint->add_option("--grid", jo_grid, "Grid size G");
  joint->add_option("--bandwidth", jo_bandwidth, "Kernel width in rank units (default m/50)");
  joint->add_option("--out", jo_out, "Output directory")->required();

  // detect
  std::string de_joint;
  std::string de_out;
  double de_threshold = kDefaultThreshold;
  std::optional<double> de_quadrant;
  bool de_two_sided = false;
  auto* detect = app.add_subcommand("detect", "Flag extreme standardized densities");
  detect->add_option("--joint", de_joint, "Directory written by `joint`")->required();
  detect->add_option("--threshold", de_threshold, "Threshold in standard deviations");
  detect->add_option("--quadrant", de_quadrant, "Minimum rank fraction on both axes");
  detect->add_flag("--two-sided", de_two_sided, "Flag |z| > threshold");
  detect->add_option("--out", de_out, "Report JSON")->required();

  // pipeline
  std::string pi_config;
  std::string pi_events;
  std::string pi_consumption;
  std::string pi_out;
  std::string pi_window_start;
  std::string pi_window_end;
  std::string pi_rule;
  std::string pi_rule_a;
  std::string pi_rule_b;
  std::string pi_mode;
  std::string pi_strategy;
  std::optional<double> pi_bandwidth;
  std::optional<double> pi_threshold;
  std::optional<double> pi_quadrant;
  std::optional<int> pi_grid;
  std::optional<int> pi_parts;
  std::optional<int> pi_reps;
  std::optional<std::uint64_t> pi_seed;
  bool pi_two_sided = false;
  auto* pipeline = app.add_subcommand("pipeline", "Run partition -> transform -> distance -> joint -> detect");
  pipeline->add_option("--config", pi_config, "JSON config file");
  pipeline->add_option("--events", pi_events, "Events CSV");
  pipeline->add_option("--consumption", pi_consumption, "Consumption CSV");
  pipeline->add_option("--out", pi_out, "Output directory");
  pipeline->add_option("--window-start", pi_window_start, "YYYY-MM-DD");
  pipeline->add_option("--window-end", pi_window_end, "YYYY-MM-DD");
  pipeline->add_option("--rule", pi_rule, "Stopping rule for both partitions");
  pipeline->add_option("--rule-a", pi_rule_a, "Stopping rule for the event partition");
  pipeline->add_option("--rule-b", pi_rule_b, "Stopping rule for the consumption partition");
  pipeline->add_option("--bandwidth", pi_bandwidth, "Kernel width in rank units");
  pipeline->add_option("--grid", pi_grid, "Density grid size");
  pipeline->add_option("--threshold", pi_threshold, "Threshold in standard deviations");
  pipeline->add_option("--quadrant", pi_quadrant, "Minimum rank fraction on both axes");
  pipeline->add_flag("--two-sided", pi_two_sided, "Flag |z| > threshold");
  pipeline->add_option("--mode", pi_mode, "by-type | random");
  pipeline->add_option("--parts", pi_parts, "Random mode part count");
  pipeline->add_option("--repetitions", pi_reps, "Random mode repetitions");
  pipeline->add_option("--seed", pi_seed, "Seed echoed into the report / random mode");
  pipeline->add_option("--strategy", pi_strategy, "full | sparse | vectorized");

  // bench
  std::vector<std::size_t> be_sizes;
  BenchConfig be_config;
  std::size_t be_cap_mb = be_config.memory_cap_bytes >> 20;
  std::string be_out;
  auto* benchmark = app.add_subcommand("bench", "Time the three scaling strategies");
  benchmark->add_option("--sizes", be_sizes, "Ascending row counts")->delimiter(',')->required();
  benchmark->add_option("--cols", be_config.cols, "Column count");
  benchmark->add_option("--repeats", be_config.repeats, "Runs per strategy and size (>= 3)");
  benchmark->add_option("--seed", be_config.seed, "Random seed");
  benchmark->add_option("--memory-cap-mb", be_cap_mb, "Skip full-diagonal runs above this");
  benchmark->add_option("--out", be_out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      if (!synth_start.empty()) synth_spec.start = parse_date(synth_start);
      return run_synth(synth_spec, synth_out, synth_planted);
    }

    if (*code_ev) {
      const auto records = parse_events_csv(ce_events);
      const DateWindow window = ce_window.resolve(records, [](const EventRecord& r) {
        return std::chrono::floor<std::chrono::days>(r.timestamp);
      });
      CodingResult result = code_events(records, window);
      if (ce_double_log) result.coded = double_log_transform(std::move(result.coded));
      auto out = open_output(ce_out);
      write_coded_csv(out, result.coded);
      if (!ce_drops.empty()) write_drops(ce_drops, result.report);
      print_drops(result.report);
      return 0;
    }

    if (*code_co) {
      const auto records = parse_consumption_csv(cc_input);
      const DateWindow window = cc_window.resolve(
          records, [](const ConsumptionRecord& r) { return r.date; });
      CodingResult result = code_consumption(records, window);
      auto out = open_output(cc_out);
      write_coded_csv(out, result.coded);
      if (!cc_drops.empty()) write_drops(cc_drops, result.report);
      print_drops(result.report);
      return 0;
    }

    if (*ordinate) {
      const CodedMatrix coded = read_coded_csv(or_input);
      Ordination ord;
      if (or_method == "ca") {
        ord = ordinate_ca(coded, parse_strategy(or_strategy));
      } else if (or_method == "pca") {
        ord = ordinate_pca(coded);
      } else {
        throw Error(ErrorCode::kConfigError, "--method must be ca or pca");
      }
      const fs::path dir = or_out;
      fs::create_directories(dir);
      {
        auto out = open_output(dir / "rows.csv");
        write_row_coordinates_csv(out, ord, ord.f.cols());
      }
      {
        auto out = open_output(dir / "columns.csv");
        write_column_coordinates_csv(out, ord, ord.v.cols());
      }
      {
        auto out = open_output(dir / "scree.csv");
        write_scree_csv(out, scree(ord));
      }
      const auto as_vec = [](const Vector& v) {
        return std::vector<double>(v.data(), v.data() + v.size());
      };
      write_json_file(dir / "ordination.json",
                      {{"method", std::string(to_string(ord.method))},
                       {"cases", ord.case_ids.size()},
                       {"variables", ord.variable_names.size()},
                       {"singular_values", as_vec(ord.singular_values)},
                       {"eigenvalues", as_vec(ord.eigenvalues)},
                       {"variance_fraction", as_vec(ord.variance_fraction)},
                       {"kaiser_scaled_eigenvalues", kaiser_scale(ord)}});
      return 0;
    }

    if (*distances) {
      const Ordination ord = load_ordination(di_ord);
      const int k = select_components(ord, StoppingRule::parse(di_rule));
      const DistanceVector d = ordinal_distances(ord, k);
      {
        auto out = open_output(di_out);
        write_distances_csv(out, d);
      }
      if (!di_hist.empty()) {
        auto out = open_output(di_hist);
        write_histogram_csv(out, histogram(d.distances, di_bins));
      }
      std::cerr << "k = " << k << '\n';
      return 0;
    }

    if (*joint) {
      const DistanceVector a = read_distances_csv(jo_a);
      const DistanceVector b = read_distances_csv(jo_b);
      const CommonCases common = align_common_cases(a, b);
      const JointRankDensity jrd =
          joint_density(common.case_ids, mid_ranks(common.distances_a),
                        mid_ranks(common.distances_b), jo_grid, jo_bandwidth);
      const fs::path dir = jo_out;
      fs::create_directories(dir);
      {
        auto out = open_output(dir / "joint.csv");
        write_joint_csv(out, jrd);
      }
      {
        auto out = open_output(dir / "density_grid.csv");
        write_matrix_csv(out, jrd.z_scaled_grid());
      }
      write_json_file(dir / "joint.json", {{"cases", jrd.cases()},
                                           {"bandwidth", jrd.bandwidth},
                                           {"grid_size", jrd.grid_size},
                                           {"density_mean", jrd.density_mean},
                                           {"density_sd", jrd.density_sd}});
      return 0;
    }

    if (*detect) {
      const fs::path dir = de_joint;
      JointRankDensity jrd = read_joint_csv(dir / "joint.csv");
      if (fs::exists(dir / "joint.json")) {
        const auto meta = read_json_file(dir / "joint.json");
        jrd.bandwidth = meta.value("bandwidth", 0.0);
        jrd.grid_size = meta.value("grid_size", 0);
      }
      const AnomalyReport report =
          detect_anomalies(jrd, DetectOptions{de_threshold, de_quadrant, de_two_sided});
      write_json_file(de_out, report_to_json(report));
      std::cerr << report.flagged.size() << " of " << report.total_cases
                << " cases flagged\n";
      return 0;
    }

    if (*pipeline) {
      PipelineConfig config;
      if (!pi_config.empty()) config = load_config(pi_config);
      nlohmann::json overrides = nlohmann::json::object();
      if (!pi_events.empty()) overrides["event_input"] = pi_events;
      if (!pi_consumption.empty()) overrides["consumption_input"] = pi_consumption;
      if (!pi_out.empty()) overrides["output_dir"] = pi_out;
      if (!pi_window_start.empty()) overrides["window_start"] = pi_window_start;
      if (!pi_window_end.empty()) overrides["window_end"] = pi_window_end;
      if (!pi_rule.empty()) overrides["stopping_rule"] = pi_rule;
      if (!pi_rule_a.empty()) overrides["stopping_rule_a"] = pi_rule_a;
      if (!pi_rule_b.empty()) overrides["stopping_rule_b"] = pi_rule_b;
      if (pi_bandwidth) overrides["bandwidth"] = *pi_bandwidth;
      if (pi_grid) overrides["grid_size"] = *pi_grid;
      if (pi_threshold) overrides["threshold"] = *pi_threshold;
      if (pi_quadrant) overrides["quadrant_filter"] = *pi_quadrant;
      if (pi_two_sided) overrides["two_sided"] = true;
      if (!pi_mode.empty()) overrides["mode"] = pi_mode;
      if (pi_parts) overrides["part_count"] = *pi_parts;
      if (pi_reps) overrides["repetitions"] = *pi_reps;
      if (pi_seed) overrides["seed"] = *pi_seed;
      if (!pi_strategy.empty()) overrides["strategy"] = pi_strategy;
      config = config_from_json(overrides, config);
      const AnomalyReport report = run_pipeline(config);
      std::cerr << report.flagged.size() << " of " << report.total_cases
                << " common cases flagged (k_a = " << report.parameters.k_a
                << ", k_b = " << report.parameters.k_b << ")\n";
      if (config.output_dir.empty()) std::cout << report_to_json(report).dump(2) << '\n';
      return 0;
    }

    if (*benchmark) {
      be_config.sizes = be_sizes;
      be_config.memory_cap_bytes = be_cap_mb << 20;
      const auto results = bench(be_config);
      if (be_out.empty()) {
        write_bench_csv(std::cout, results);
      } else {
        auto out = open_output(be_out);
        write_bench_csv(out, results);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
