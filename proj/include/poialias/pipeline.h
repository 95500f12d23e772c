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

#ifndef POIALIAS_PIPELINE_H_
#define POIALIAS_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "poialias/discovery.h"
#include "poialias/synth.h"

namespace poialias {

// Settings for every pipeline stage. Each field is addressable as a
// key=value pair; synthetic generator fields use a "synth." prefix.
struct PipelineConfig {
  std::string input_dir;  // empty: read from out_dir
  std::string out_dir = "out";
  std::string source_dir;
  std::string target_dir;
  std::string method = "jaccard";
  // "calibrate" or a number. For editdist the number is the edit-distance
  // cutoff: a pair links iff its normalized distance is below it.
  std::string threshold = "calibrate";
  double local_window_m = kDefaultLocalWindowM;
  std::size_t grid_n = kDefaultGridN;
  double kl_epsilon = kDefaultKlEpsilon;
  std::size_t min_profile_points = kDefaultMinProfilePoints;
  double cluster_threshold = kDefaultClusterThreshold;
  double bbox_padding = kDefaultBboxPadding;
  double train_frac = 0.8;
  std::vector<std::size_t> grids{20, 50, 150, 300, 500};
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string verbosity = "warn";
  bool dump_profiles = false;
  bool dump_density = false;
  SynthConfig synth;

  // Throws kInvalidArgument for unknown keys or unparsable values.
  void Set(std::string_view key, std::string_view value);
  std::string Get(std::string_view key) const;
  // Reads key=value lines; blank lines and '#' comments are skipped.
  void LoadFile(const std::filesystem::path& path);
  // Every key with its effective value, synth keys included.
  std::map<std::string, std::string> Resolved() const;

  std::filesystem::path InputDir() const;
  MetricConfig Metric() const;
};

// Stage names: synth, ingest-check, preprocess, discover, evaluate,
// crossval, transfer, sweep.
const std::vector<std::string>& StageNames();

// Runs one stage. Outputs are published atomically under out_dir together
// with an updated run_manifest.json. Errors are rethrown with the stage
// name prefixed to the message and the original code kept.
void RunStage(std::string_view stage, const PipelineConfig& config);

}  // namespace poialias

#endif  // POIALIAS_PIPELINE_H_
