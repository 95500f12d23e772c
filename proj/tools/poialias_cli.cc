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

// Command-line front end. Talks to the library only through poialias.h.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "poialias/poialias.h"

namespace {

struct Options {
  std::string config_file;
  std::vector<std::string> params;
  // (config key, value) for flags given explicitly, in declaration order.
  std::vector<std::pair<std::string, std::string>> flags;
  int verbose = 0;
};

class ConfigHandle {
 public:
  ConfigHandle() {
    if (pa_config_create(&config_) != PA_OK) config_ = nullptr;
  }
  ~ConfigHandle() { pa_config_destroy(config_); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
  pa_config* get() const { return config_; }

 private:
  pa_config* config_ = nullptr;
};

int Report(pa_status status) {
  std::fprintf(stderr, "poialias: error (%s): %s\n", pa_status_name(status),
               pa_last_error());
  return 1 + static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discover POI aliases from user mobility profiles."};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;

  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const Flag kFlags[] = {
      {"--out", "out_dir", "Output directory (default: out)"},
      {"--input", "input_dir", "Input corpus directory (default: --out)"},
      {"--seed", "synth.seed", "Synthetic generator seed"},
      {"--method", "method", "centroid, loccent, kl, jaccard or editdist"},
      {"--threshold", "threshold",
       "Score threshold or 'calibrate' (editdist: distance cutoff)"},
      {"--local-window-m", "local_window_m", "Local window side in meters"},
      {"--grid-n", "grid_n", "Grid resolution per axis"},
      {"--kl-epsilon", "kl_epsilon", "KL smoothing constant"},
      {"--min-profile-points", "min_profile_points",
       "Profiles with fewer points are insufficient"},
      {"--cluster-threshold", "cluster_threshold",
       "Near-duplicate name threshold"},
      {"--train-frac", "train_frac", "Training share of districts per fold"},
      {"--source", "source_dir", "Source city directory (transfer)"},
      {"--target", "target_dir", "Target city directory (transfer)"},
      {"--grids", "grids", "Comma-separated grid sizes (sweep)"},
      {"--threads", "threads", "Worker threads, 0 = all cores"},
  };
  std::vector<std::string> values(std::size(kFlags));
  std::vector<CLI::Option*> handles;
  for (std::size_t i = 0; i < std::size(kFlags); ++i) {
    handles.push_back(app.add_option(kFlags[i].name, values[i], kFlags[i].help));
  }
  app.add_option("--config", opt.config_file, "key=value config file");
  app.add_option("--param,-p", opt.params,
                 "Extra key=value setting (repeatable)");
  bool dump_profiles = false, dump_density = false;
  app.add_flag("--dump-profiles", dump_profiles,
               "Write profiles.jsonl during discover");
  app.add_flag("--dump-density", dump_density,
               "Write density matrices during discover");
  app.add_flag("-v,--verbose", opt.verbose, "More logging (repeatable)");

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub kSubs[] = {
      {"synth", "Generate a synthetic city"},
      {"ingest-check", "Validate input files and report row errors"},
      {"preprocess", "Clean and cluster POI names"},
      {"discover", "Score pairs and infer the alias matrix"},
      {"evaluate", "Score discover output against labels"},
      {"crossval", "District cross-validation"},
      {"transfer", "Calibrate on one city, evaluate on another"},
      {"sweep", "Grid-resolution sweep"},
  };
  for (const auto& s : kSubs) app.add_subcommand(s.name, s.help);

  CLI11_PARSE(app, argc, argv);

  ConfigHandle config;
  if (!config.get()) return Report(PA_INTERNAL);
  pa_status st = PA_OK;
  if (!opt.config_file.empty()) {
    st = pa_config_load_file(config.get(), opt.config_file.c_str());
    if (st != PA_OK) return Report(st);
  }
  for (const auto& p : opt.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "poialias: --param expects key=value, got '%s'\n",
                   p.c_str());
      return 2;
    }
    st = pa_config_set(config.get(), p.substr(0, eq).c_str(),
                       p.substr(eq + 1).c_str());
    if (st != PA_OK) return Report(st);
  }
  for (std::size_t i = 0; i < std::size(kFlags); ++i) {
    if (handles[i]->count() == 0) continue;
    st = pa_config_set(config.get(), kFlags[i].key, values[i].c_str());
    if (st != PA_OK) return Report(st);
  }
  if (dump_profiles) pa_config_set(config.get(), "dump_profiles", "true");
  if (dump_density) pa_config_set(config.get(), "dump_density", "true");
  if (opt.verbose > 0) {
    pa_config_set(config.get(), "verbosity", opt.verbose > 1 ? "debug" : "info");
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  st = pa_run_stage(config.get(), stage.c_str());
  if (st != PA_OK) return Report(st);
  return EXIT_SUCCESS;
}
