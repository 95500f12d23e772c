/*
 * Copyright 2026 The poialias Authors.
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
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "poialias/csv.h"
#include "poialias/error.h"
#include "poialias/ingestion.h"
#include "poialias/pipeline.h"

namespace poialias {
namespace {

namespace fs = std::filesystem;

fs::path Fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("poialias_pipe_" + name);
  fs::remove_all(dir);
  return dir;
}

PipelineConfig SmallConfig(const fs::path& out) {
  PipelineConfig c;
  c.out_dir = out.string();
  c.Set("synth.pois_per_district", "40");
  c.Set("synth.n_districts", "3");
  c.Set("synth.district_extent_m", "4000");
  c.Set("synth.users_per_poi", "10");
  c.Set("synth.points_per_user", "20");
  return c;
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string(POIALIAS_CLI_PATH) + " " + args + " 2>" +
                          (fs::temp_directory_path() / "poialias_cli_err.txt").string();
  return std::system(cmd.c_str());
}

std::string CliStderr() {
  return ReadFile(fs::temp_directory_path() / "poialias_cli_err.txt");
}

TEST(PipelineConfig, SetGetAndResolved) {
  PipelineConfig c;
  c.Set("method", "loc_cent");
  c.Set("grid_n", "150");
  c.Set("grids", "20, 50");
  c.Set("synth.seed", "9");
  EXPECT_EQ(c.Get("method"), "loccent");
  EXPECT_EQ(c.Get("grid_n"), "150");
  EXPECT_EQ(c.Get("grids"), "20,50");
  EXPECT_EQ(c.Get("synth.seed"), "9");
  EXPECT_EQ(c.Get("local_window_m"), "640");
  EXPECT_EQ(c.Get("threshold"), "calibrate");
  EXPECT_EQ(c.Get("input_dir"), "out");
  EXPECT_THROW(c.Set("method", "bert"), Error);
  EXPECT_THROW(c.Set("grid_n", "-3"), Error);
  EXPECT_THROW(c.Set("threshold", "high"), Error);
  EXPECT_THROW(c.Set("train_frac", "1.0"), Error);
  EXPECT_THROW(c.Set("bogus", "1"), Error);
  EXPECT_THROW(c.Get("bogus"), Error);
}

TEST(PipelineConfig, EditThresholdIsNegatedScore) {
  PipelineConfig c;
  c.Set("method", "editdist");
  c.Set("threshold", "0.3");
  EXPECT_DOUBLE_EQ(c.Metric().threshold, -0.3);
}

TEST(PipelineConfig, LoadFile) {
  const fs::path dir = Fresh("cfgfile");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "# comment\n\nmethod = kl\n"
                                    "synth.away_fraction=0.25\n";
  PipelineConfig c;
  c.LoadFile(dir / "run.cfg");
  EXPECT_EQ(c.method, "kl");
  EXPECT_EQ(c.synth.away_fraction, 0.25);
  std::ofstream(dir / "bad.cfg") << "method kl\n";
  EXPECT_THROW(c.LoadFile(dir / "bad.cfg"), Error);
  EXPECT_THROW(c.LoadFile(dir / "absent.cfg"), Error);
}

TEST(Pipeline, HappyPathWritesArtifacts) {
  const fs::path out = Fresh("happy");
  PipelineConfig c = SmallConfig(out);
  c.dump_profiles = true;
  c.dump_density = true;
  for (const char* stage : {"synth", "ingest-check", "preprocess", "discover",
                            "evaluate"}) {
    RunStage(stage, c);
  }
  for (const char* f : {"addresses.csv", "locations.csv", "labels.csv",
                        "truth_meta.json", "ingest_report.json",
                        "canonical_map.csv", "aliases.csv", "discovery.json",
                        "profiles.jsonl", "report.json", "run_manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_TRUE(fs::exists(out / "density" / "D01" / "index.csv"));
  const auto report = nlohmann::json::parse(ReadFile(out / "report.json"));
  EXPECT_TRUE(report["overall"].contains("f1"));
  EXPECT_GE(report["overall"]["f1"].get<double>(), 0.9);
  const auto manifest = nlohmann::json::parse(ReadFile(out / "run_manifest.json"));
  EXPECT_TRUE(manifest["stages"].contains("synth"));
  EXPECT_TRUE(manifest["stages"]["discover"]["timings"].contains("score_ms"));
  EXPECT_EQ(manifest["stages"]["evaluate"]["config"]["method"], "jaccard");

  const auto rows = csv::Parse(ReadFile(out / "aliases.csv"));
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"district", "standard_name",
                                                      "candidate_name", "score",
                                                      "decision"}));
  EXPECT_EQ(csv::Parse(ReadFile(out / "canonical_map.csv"))[0].fields,
            (std::vector<std::string>{"district", "raw_name", "canonical_name"}));
}

TEST(Pipeline, EvaluateMatchesDiscoverCalibration) {
  const fs::path out = Fresh("consistency");
  PipelineConfig c = SmallConfig(out);
  c.method = "centroid";
  for (const char* stage : {"synth", "discover", "evaluate"}) RunStage(stage, c);
  const auto discovery = nlohmann::json::parse(ReadFile(out / "discovery.json"));
  const auto report = nlohmann::json::parse(ReadFile(out / "report.json"));
  EXPECT_EQ(discovery["calibration"]["f1"], report["overall"]["f1"]);
  EXPECT_EQ(discovery["threshold"], report["threshold"]);
}

TEST(Pipeline, CrossvalTransferSweep) {
  const fs::path a = Fresh("city_a"), b = Fresh("city_b"), out = Fresh("multi");
  PipelineConfig ca = SmallConfig(a), cb = SmallConfig(b);
  cb.Set("synth.seed", "77");
  RunStage("synth", ca);
  RunStage("synth", cb);

  PipelineConfig c = SmallConfig(out);
  c.input_dir = a.string();
  RunStage("crossval", c);
  auto report = nlohmann::json::parse(ReadFile(out / "report.json"));
  EXPECT_GE(report["folds"].size(), 2u);
  EXPECT_TRUE(report.contains("pooled"));

  c.source_dir = a.string();
  c.target_dir = b.string();
  RunStage("transfer", c);
  report = nlohmann::json::parse(ReadFile(out / "report.json"));
  EXPECT_TRUE(report["target"]["overall"].contains("f1"));

  c.Set("grids", "20,50");
  c.Set("method", "kl");
  RunStage("sweep", c);
  const auto rows = csv::Parse(ReadFile(out / "sweep.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"grid_n", "method",
                                                      "precision", "recall", "f1"}));
  EXPECT_EQ(rows[1].fields[0], "20");
  EXPECT_EQ(rows[2].fields[1], "kl");
}

TEST(Pipeline, IdenticalReportsAcrossRuns) {
  std::string reports[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = Fresh("determinism" + std::to_string(i));
    PipelineConfig c = SmallConfig(out);
    for (const char* stage : {"synth", "discover", "evaluate"}) RunStage(stage, c);
    reports[i] = ReadFile(out / "report.json");
  }
  EXPECT_EQ(reports[0], reports[1]);
}

TEST(Pipeline, ErrorsCarryStageAndPathAndLeaveNoArtifacts) {
  const fs::path out = Fresh("missing");
  PipelineConfig c = SmallConfig(out);
  RunStage("synth", c);
  fs::remove(out / "locations.csv");
  const auto before = ReadFile(out / "run_manifest.json");
  try {
    RunStage("discover", c);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
    const std::string msg = e.what();
    EXPECT_EQ(msg.rfind("discover: ", 0), 0u) << msg;
    EXPECT_NE(msg.find("locations.csv"), std::string::npos) << msg;
  }
  EXPECT_FALSE(fs::exists(out / "aliases.csv"));
  EXPECT_EQ(ReadFile(out / "run_manifest.json"), before);
  for (const auto& entry : fs::directory_iterator(out)) {
    EXPECT_EQ(entry.path().string().find(".tmp-"), std::string::npos);
  }
  EXPECT_THROW(RunStage("bogus", c), Error);
  EXPECT_THROW(RunStage("transfer", c), Error);
}

TEST(Pipeline, EvaluateWithoutDiscoverFails) {
  const fs::path out = Fresh("nodiscover");
  PipelineConfig c = SmallConfig(out);
  RunStage("synth", c);
  EXPECT_THROW(RunStage("evaluate", c), Error);
}

TEST(Cli, HappyPath) {
  const fs::path out = Fresh("cli");
  const std::string o = " --out " + out.string();
  ASSERT_EQ(RunCli("synth --seed 7 -p synth.pois_per_district=40" + o), 0);
  ASSERT_EQ(RunCli("discover --method jaccard --threshold calibrate" + o), 0);
  ASSERT_EQ(RunCli("evaluate" + o), 0);
  const auto report = nlohmann::json::parse(ReadFile(out / "report.json"));
  EXPECT_TRUE(report["overall"].contains("f1"));
  EXPECT_EQ(report["method"], "jaccard");
  const auto manifest = nlohmann::json::parse(ReadFile(out / "run_manifest.json"));
  EXPECT_EQ(manifest["stages"]["synth"]["config"]["synth.seed"], "7");
}

TEST(Cli, MissingLocationsFailsNamingPath) {
  const fs::path out = Fresh("cli_missing");
  ASSERT_EQ(RunCli("synth -p synth.pois_per_district=20 --out " + out.string()), 0);
  fs::remove(out / "locations.csv");
  EXPECT_NE(RunCli("discover --out " + out.string()), 0);
  EXPECT_NE(CliStderr().find("locations.csv"), std::string::npos) << CliStderr();
}

TEST(Cli, RejectsBadArguments) {
  EXPECT_NE(RunCli("discover --method bert --out /tmp/x"), 0);
  EXPECT_NE(RunCli("nosuchcommand"), 0);
  EXPECT_NE(RunCli("synth -p nonsense --out /tmp/x"), 0);
}

TEST(Cli, ConfigFile) {
  const fs::path out = Fresh("cli_cfg");
  fs::create_directories(out);
  std::ofstream(out / "run.cfg") << "synth.pois_per_district = 20\nmethod = loccent\n";
  const std::string o = " --out " + out.string();
  ASSERT_EQ(RunCli("synth --config " + (out / "run.cfg").string() + o), 0);
  ASSERT_EQ(RunCli("discover --config " + (out / "run.cfg").string() + o), 0);
  const auto d = nlohmann::json::parse(ReadFile(out / "discovery.json"));
  EXPECT_EQ(d["method"], "loccent");
}

}  // namespace
}  // namespace poialias
