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

#ifndef POIALIAS_SYNTH_H_
#define POIALIAS_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "poialias/geo.h"
#include "poialias/ingestion.h"

namespace poialias {

// Seedable generator with a fixed, documented algorithm: std::mt19937_64
// (whose output sequence the C++ standard pins down) seeded through
// SplitMix64. All distributions are implemented here rather than taken from
// <random>, whose distribution algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for (seed, tag, index).
  static Rng Derive(std::uint64_t seed, std::string_view tag,
                    std::uint64_t index);

  std::uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }
  // Uniform integer in [lo, hi], unbiased (rejection sampling).
  std::uint64_t UniformInt(std::uint64_t lo, std::uint64_t hi);
  bool Bernoulli(double p) { return Uniform01() < p; }
  // Standard normal via the Box-Muller transform (no cached second draw).
  double Normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

struct IntRange {
  std::size_t min = 0;
  std::size_t max = 0;
};

struct SynthConfig {
  std::uint64_t seed = 42;
  std::size_t n_districts = 2;
  std::size_t pois_per_district = 100;
  double alias_fraction = 0.3;
  IntRange aliases_per_poi{1, 2};
  IntRange users_per_poi{20, 20};
  IntRange points_per_user{40, 40};
  double home_scatter_m = 50.0;
  double away_fraction = 0.1;
  IntRange away_places_per_user{1, 3};
  double away_scatter_m = 30.0;
  double typo_rate = 0.05;
  double district_extent_m = 6000.0;
  double min_separation_m = 200.0;
  // Probability that a user of an aliased POI writes the standard name once
  // every name has its guaranteed writers.
  double standard_share = 0.5;
  // Correctly spelled writers guaranteed for every name.
  std::size_t min_writers_per_name = 2;
  // Chance that a written name gets cosmetic noise (spaces, punctuation,
  // case) that CleanText removes.
  double noise_rate = 0.05;
  double origin_lat = 31.30;
  double origin_lon = 120.57;
  double district_spacing_deg = 0.1;
  std::string province = "Jiangsu";
  std::string city = "Suzhou";

  // Throws kInvalidArgument on empty ranges or out-of-range fractions.
  void Validate() const;

  // key=value interface shared by config files and the CLI. Keys are the
  // field names; ranges use `<name>_min` / `<name>_max`.
  void Set(std::string_view key, std::string_view value);
  std::map<std::string, std::string> ToMap() const;
};

struct PoiTruth {
  std::string standard_name;
  std::vector<std::string> aliases;
  GeoPoint location;
};

struct DistrictTruth {
  std::string name;
  GeoPoint origin;  // south-west corner of the district square
  std::vector<PoiTruth> pois;
  std::map<std::string, std::string> typo_variants;  // variant -> intended
};

struct SynthCity {
  SynthConfig config;
  Corpus corpus;
  std::vector<DistrictTruth> truth;
  std::size_t planted_aliases = 0;
};

// Deterministic in `config`: the same config always yields identical output.
//
// Each district is a square of district_extent_m with POIs placed uniformly
// under a minimum-separation rule. Standard names and alias names are drawn
// from disjoint letter sets so aliases share no substring with their
// standard. Every user lives at one POI, writes its standard name or one of
// its aliases, and emits points scattered around the POI plus a share of
// points at personal away places. Labels cover every (standard, alias) pair
// within each district.
SynthCity GenerateCity(const SynthConfig& config);

// Writes addresses.csv, locations.csv, labels.csv, standards.csv and
// truth_meta.json into `dir`.
void WriteCity(const SynthCity& city, const std::filesystem::path& dir);

std::string TruthMetaJson(const SynthCity& city);

}  // namespace poialias

#endif  // POIALIAS_SYNTH_H_
