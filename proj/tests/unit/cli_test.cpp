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

#include <cstdlib>
#include <set>
#include <string>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "temp_dir.hpp"

namespace {

namespace fs = std::filesystem;
using jointrank::testing::slurp;
using jointrank::testing::spit;
using jointrank::testing::TempDir;

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + JOINTRANK_CLI + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::set<std::string> flagged_ids(const fs::path& report) {
  std::set<std::string> ids;
  const auto j = nlohmann::json::parse(slurp(report));
  for (const auto& f : j["flagged"]) {
    ids.insert(f["case_id"].get<std::string>());
  }
  return ids;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(run("synth --cases 300 --codes 30 --days 14 --seed 3 --out " + q(dir_ / "s"),
                  dir_ / "synth.log"),
              0)
        << slurp(dir_ / "synth.log");
  }

  std::string q(const fs::path& p) const { return "\"" + p.string() + "\""; }

  TempDir dir_{"cli"};
};

TEST_F(Cli, StagedCommandsMatchPipeline) {
  const auto d = [&](const char* name) { return q(dir_ / name); };
  const std::string window = " --window-start 2024-01-01 --window-end 2024-01-14";
  const fs::path log = dir_ / "log";
  ASSERT_EQ(run("code-events --double-log --events " + d("s/events.csv") + " --out " +
                    d("ev.csv") + window,
                log),
            0)
      << slurp(log);
  ASSERT_EQ(run("code-consumption --consumption " + d("s/consumption.csv") + " --out " +
                    d("co.csv") + window,
                log),
            0);
  ASSERT_EQ(run("ordinate --input " + d("ev.csv") + " --out " + d("oa"), log), 0);
  ASSERT_EQ(run("ordinate --method pca --input " + d("co.csv") + " --out " + d("ob"), log), 0);
  ASSERT_EQ(run("distances --ordination " + d("oa") + " --out " + d("da.csv"), log), 0);
  ASSERT_EQ(run("distances --ordination " + d("ob") + " --out " + d("db.csv"), log), 0);
  ASSERT_EQ(run("joint --a " + d("da.csv") + " --b " + d("db.csv") + " --out " + d("j"), log), 0);
  ASSERT_EQ(run("detect --joint " + d("j") + " --out " + d("r.json"), log), 0);

  ASSERT_EQ(run("pipeline --events " + d("s/events.csv") + " --consumption " +
                    d("s/consumption.csv") + " --out " + d("p") + window,
                log),
            0)
      << slurp(log);
  const auto staged = flagged_ids(dir_ / "r.json");
  EXPECT_FALSE(staged.empty());
  EXPECT_EQ(staged, flagged_ids(dir_ / "p" / "report.json"));
  EXPECT_EQ(slurp(dir_ / "j" / "joint.csv"), slurp(dir_ / "p" / "joint.csv"));
}

TEST_F(Cli, ConfigFileAndOverrides) {
  spit(dir_ / "cfg.json", nlohmann::json{{"event_input", (dir_ / "s/events.csv").string()},
                                         {"consumption_input",
                                          (dir_ / "s/consumption.csv").string()},
                                         {"threshold", 2.5}}
                              .dump());
  const fs::path log = dir_ / "log";
  ASSERT_EQ(run("pipeline --config " + q(dir_ / "cfg.json") + " --threshold 3 --out " +
                    q(dir_ / "out"),
                log),
            0)
      << slurp(log);
  const auto report = nlohmann::json::parse(slurp(dir_ / "out" / "report.json"));
  EXPECT_EQ(report["parameters"]["threshold"], 3.0);
}

TEST_F(Cli, ExitCodes) {
  const fs::path log = dir_ / "log";
  const std::string inputs = " --events " + q(dir_ / "s/events.csv") + " --consumption " +
                             q(dir_ / "s/consumption.csv");
  EXPECT_EQ(run("", log), 2);
  EXPECT_EQ(run("pipeline --threshold high" + inputs, log), 2);
  EXPECT_EQ(run("pipeline --grid 3" + inputs, log), 2);
  EXPECT_NE(slurp(log).find("ConfigError"), std::string::npos);
  EXPECT_EQ(run("pipeline --mode sideways" + inputs, log), 2);
  EXPECT_EQ(run("pipeline --events " + q(dir_ / "missing.csv") + " --consumption " +
                    q(dir_ / "s/consumption.csv"),
                log),
            3);
  EXPECT_NE(slurp(log).find("[ingest]"), std::string::npos);

  spit(dir_ / "bad.csv", "case_id,timestamp,code\nC1,not-a-time,E1\n");
  EXPECT_EQ(run("pipeline --events " + q(dir_ / "bad.csv") + " --consumption " +
                    q(dir_ / "s/consumption.csv"),
                log),
            3);
  spit(dir_ / "bad.json", "{\"threshold\": ");
  EXPECT_EQ(run("pipeline --config " + q(dir_ / "bad.json"), log), 2);
  EXPECT_EQ(run("--help", log), 0);
}

TEST_F(Cli, BenchWritesCsv) {
  const fs::path log = dir_ / "log";
  ASSERT_EQ(run("bench --sizes 50,100 --cols 10 --out " + q(dir_ / "bench.csv"), log), 0)
      << slurp(log);
  const std::string csv = slurp(dir_ / "bench.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_NE(csv.find("vectorized,100,10,ok"), std::string::npos);
}

}  // namespace
