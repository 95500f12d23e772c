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

#include "poialias/synth.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "json.hpp"
#include "poialias/artifacts.h"
#include "poialias/error.h"
#include "poialias/preprocess.h"

namespace poialias {

namespace {

// Standard names and aliases draw from disjoint letters.
constexpr std::string_view kStandardConsonants = "bcdfghjklm";
constexpr std::string_view kStandardVowels = "aei";
constexpr std::string_view kAliasConsonants = "npqrstvwxyz";
constexpr std::string_view kAliasVowels = "ou";

// Minimum normalized edit distance between any two generated names of a
// district; keeps typo variants of different names from chaining together.
constexpr double kNameSeparation = 0.5;

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

char Pick(Rng& rng, std::string_view letters) {
  return letters[rng.UniformInt(0, letters.size() - 1)];
}

std::string MakeName(Rng& rng, std::string_view consonants,
                     std::string_view vowels) {
  const std::size_t syllables = rng.UniformInt(3, 4);
  std::string name;
  for (std::size_t s = 0; s < syllables; ++s) {
    name.push_back(static_cast<char>(std::toupper(Pick(rng, consonants))));
    name.push_back(Pick(rng, vowels));
    if (rng.Bernoulli(0.3)) name.push_back(Pick(rng, vowels));
  }
  return name;
}

std::string UniqueName(Rng& rng, std::string_view consonants,
                       std::string_view vowels,
                       std::vector<std::string>& cleaned_existing) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::string name = MakeName(rng, consonants, vowels);
    const std::string cleaned = CleanText(name);
    const bool far = std::all_of(
        cleaned_existing.begin(), cleaned_existing.end(),
        [&](const std::string& other) {
          return NormalizedEditDistance(cleaned, other) > kNameSeparation;
        });
    if (far) {
      cleaned_existing.push_back(cleaned);
      return name;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "cannot generate enough distinct POI names; lower "
              "pois_per_district");
}

// One substitution in the cleaned spelling, using the name's own alphabet.
std::string MakeTypo(Rng& rng, const std::string& name, bool alias) {
  std::string cleaned = CleanText(name);
  const std::string letters =
      alias ? std::string(kAliasConsonants) + std::string(kAliasVowels)
            : std::string(kStandardConsonants) + std::string(kStandardVowels);
  const std::size_t pos = rng.UniformInt(0, cleaned.size() - 1);
  char c;
  do {
    c = Pick(rng, letters);
  } while (c == cleaned[pos]);
  cleaned[pos] = c;
  return cleaned;
}

std::string AddNoise(Rng& rng, const std::string& name) {
  std::string out = name;
  switch (rng.UniformInt(0, 3)) {
    case 0:
      return " " + out + " ";
    case 1:
      return out + "!";
    case 2:
      out.insert(out.size() / 2, " ");
      return out;
    default:
      for (char& c : out) c = static_cast<char>(std::toupper(c));
      return out;
  }
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::uint64_t ParseUnsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "synth." + std::string(key) + ": expected a non-negative "
                "integer, got '" + std::string(value) + "'");
  }
  return out;
}

double ParseReal(std::string_view key, std::string_view value) {
  double out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() ||
      !std::isfinite(out)) {
    throw Error(ErrorCode::kInvalidArgument,
                "synth." + std::string(key) + ": expected a number, got '" +
                    std::string(value) + "'");
  }
  return out;
}

std::string DistrictName(std::size_t d) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "D%02zu", d + 1);
  return buf;
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(SplitMix64(seed)) {}

Rng Rng::Derive(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return Rng(seed ^ SplitMix64(Fnv1a(tag) ^ SplitMix64(index)));
}

double Rng::Uniform01() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::UniformInt(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t range = hi - lo + 1;
  if (range == 0) return NextU64();
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return lo + x % range;
}

double Rng::Normal() {
  const double u1 = 1.0 - Uniform01();
  const double u2 = Uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

void SynthConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synth config: " + what);
  };
  auto check_range = [&](const IntRange& r, const char* name) {
    if (r.min > r.max) fail(std::string(name) + " range is empty");
  };
  auto check_fraction = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
  };
  if (n_districts == 0) fail("n_districts must be >= 1");
  if (pois_per_district == 0) fail("pois_per_district must be >= 1");
  check_range(aliases_per_poi, "aliases_per_poi");
  check_range(users_per_poi, "users_per_poi");
  check_range(points_per_user, "points_per_user");
  check_range(away_places_per_user, "away_places_per_user");
  if (alias_fraction > 0.0 && aliases_per_poi.min == 0) {
    fail("aliases_per_poi_min must be >= 1 when alias_fraction > 0");
  }
  if (users_per_poi.min == 0) fail("users_per_poi_min must be >= 1");
  check_fraction(alias_fraction, "alias_fraction");
  check_fraction(away_fraction, "away_fraction");
  check_fraction(typo_rate, "typo_rate");
  check_fraction(standard_share, "standard_share");
  check_fraction(noise_rate, "noise_rate");
  if (away_fraction > 0.0 && away_places_per_user.min == 0) {
    fail("away_places_per_user_min must be >= 1 when away_fraction > 0");
  }
  if (!(home_scatter_m >= 0.0) || !(away_scatter_m >= 0.0)) {
    fail("scatter must be non-negative");
  }
  if (!(district_extent_m > 0.0)) fail("district_extent_m must be positive");
  if (!(min_separation_m >= 0.0)) fail("min_separation_m must be >= 0");
  if (!IsValidGeoPoint({origin_lat, origin_lon})) fail("origin out of range");
}

void SynthConfig::Set(std::string_view key, std::string_view value) {
  auto range = [&](IntRange& r, std::string_view base) -> bool {
    if (key == base) {
      r.min = r.max = ParseUnsigned(key, value);
      return true;
    }
    if (key.size() == base.size() + 4 && key.starts_with(base)) {
      if (key.ends_with("_min")) {
        r.min = ParseUnsigned(key, value);
        return true;
      }
      if (key.ends_with("_max")) {
        r.max = ParseUnsigned(key, value);
        return true;
      }
    }
    return false;
  };
  if (key == "seed") {
    seed = ParseUnsigned(key, value);
  } else if (key == "n_districts") {
    n_districts = ParseUnsigned(key, value);
  } else if (key == "pois_per_district") {
    pois_per_district = ParseUnsigned(key, value);
  } else if (key == "alias_fraction") {
    alias_fraction = ParseReal(key, value);
  } else if (range(aliases_per_poi, "aliases_per_poi") ||
             range(users_per_poi, "users_per_poi") ||
             range(points_per_user, "points_per_user") ||
             range(away_places_per_user, "away_places_per_user")) {
  } else if (key == "home_scatter_m") {
    home_scatter_m = ParseReal(key, value);
  } else if (key == "away_fraction") {
    away_fraction = ParseReal(key, value);
  } else if (key == "away_scatter_m") {
    away_scatter_m = ParseReal(key, value);
  } else if (key == "typo_rate") {
    typo_rate = ParseReal(key, value);
  } else if (key == "district_extent_m") {
    district_extent_m = ParseReal(key, value);
  } else if (key == "min_separation_m") {
    min_separation_m = ParseReal(key, value);
  } else if (key == "standard_share") {
    standard_share = ParseReal(key, value);
  } else if (key == "min_writers_per_name") {
    min_writers_per_name = ParseUnsigned(key, value);
  } else if (key == "noise_rate") {
    noise_rate = ParseReal(key, value);
  } else if (key == "origin_lat") {
    origin_lat = ParseReal(key, value);
  } else if (key == "origin_lon") {
    origin_lon = ParseReal(key, value);
  } else if (key == "district_spacing_deg") {
    district_spacing_deg = ParseReal(key, value);
  } else if (key == "province") {
    province = std::string(value);
  } else if (key == "city") {
    city = std::string(value);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown synth key '" + std::string(key) + "'");
  }
}

std::map<std::string, std::string> SynthConfig::ToMap() const {
  auto r = [](const IntRange& range) {
    return std::to_string(range.min) + ".." + std::to_string(range.max);
  };
  return {
      {"seed", std::to_string(seed)},
      {"n_districts", std::to_string(n_districts)},
      {"pois_per_district", std::to_string(pois_per_district)},
      {"alias_fraction", FormatDouble(alias_fraction)},
      {"aliases_per_poi", r(aliases_per_poi)},
      {"users_per_poi", r(users_per_poi)},
      {"points_per_user", r(points_per_user)},
      {"home_scatter_m", FormatDouble(home_scatter_m)},
      {"away_fraction", FormatDouble(away_fraction)},
      {"away_places_per_user", r(away_places_per_user)},
      {"away_scatter_m", FormatDouble(away_scatter_m)},
      {"typo_rate", FormatDouble(typo_rate)},
      {"district_extent_m", FormatDouble(district_extent_m)},
      {"min_separation_m", FormatDouble(min_separation_m)},
      {"standard_share", FormatDouble(standard_share)},
      {"min_writers_per_name", std::to_string(min_writers_per_name)},
      {"noise_rate", FormatDouble(noise_rate)},
      {"origin_lat", FormatDouble(origin_lat)},
      {"origin_lon", FormatDouble(origin_lon)},
      {"district_spacing_deg", FormatDouble(district_spacing_deg)},
      {"province", province},
      {"city", city},
  };
}

SynthCity GenerateCity(const SynthConfig& config) {
  config.Validate();
  SynthCity city;
  city.config = config;
  Corpus& corpus = city.corpus;

  for (std::size_t d = 0; d < config.n_districts; ++d) {
    DistrictTruth truth;
    truth.name = DistrictName(d);
    truth.origin = {config.origin_lat + config.district_spacing_deg *
                                             static_cast<double>(d),
                    config.origin_lon};

    // POI placement with minimum separation.
    Rng place = Rng::Derive(config.seed, "place", d);
    std::vector<PlanarPoint> sites;
    const double sep2 = config.min_separation_m * config.min_separation_m;
    std::size_t attempts = 0;
    const std::size_t max_attempts = 10000 * config.pois_per_district;
    while (sites.size() < config.pois_per_district) {
      if (++attempts > max_attempts) {
        throw Error(ErrorCode::kInvalidArgument,
                    "invalid synth config: cannot place " +
                        std::to_string(config.pois_per_district) +
                        " POIs with the requested minimum separation");
      }
      const PlanarPoint p{place.Uniform(0.0, config.district_extent_m),
                          place.Uniform(0.0, config.district_extent_m)};
      const bool ok = std::all_of(sites.begin(), sites.end(),
                                  [&](const PlanarPoint& q) {
                                    const double dx = p.x - q.x, dy = p.y - q.y;
                                    return dx * dx + dy * dy >= sep2;
                                  });
      if (ok) sites.push_back(p);
    }

    Rng names = Rng::Derive(config.seed, "names", d);
    std::vector<std::string> standard_cleaned, alias_cleaned;
    for (const auto& site : sites) {
      PoiTruth poi;
      poi.standard_name = UniqueName(names, kStandardConsonants,
                                     kStandardVowels, standard_cleaned);
      poi.location = UnprojectLocal(site, truth.origin);
      truth.pois.push_back(std::move(poi));
    }

    // Choose the aliased POIs by a partial Fisher-Yates shuffle.
    Rng alias_rng = Rng::Derive(config.seed, "alias", d);
    const auto n_aliased = static_cast<std::size_t>(std::llround(
        config.alias_fraction * static_cast<double>(config.pois_per_district)));
    std::vector<std::size_t> order(sites.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = 0; i < n_aliased; ++i) {
      const std::size_t j = alias_rng.UniformInt(i, order.size() - 1);
      std::swap(order[i], order[j]);
    }
    std::vector<std::size_t> aliased(order.begin(), order.begin() + n_aliased);
    std::sort(aliased.begin(), aliased.end());
    for (std::size_t p : aliased) {
      const std::size_t k = alias_rng.UniformInt(config.aliases_per_poi.min,
                                                 config.aliases_per_poi.max);
      for (std::size_t a = 0; a < k; ++a) {
        truth.pois[p].aliases.push_back(UniqueName(
            alias_rng, kAliasConsonants, kAliasVowels, alias_cleaned));
        ++city.planted_aliases;
      }
    }

    // Users, their addresses and their location logs.
    std::set<std::string> used_spellings;
    for (const auto& c : standard_cleaned) used_spellings.insert(c);
    for (const auto& c : alias_cleaned) used_spellings.insert(c);
    for (std::size_t p = 0; p < truth.pois.size(); ++p) {
      const PoiTruth& poi = truth.pois[p];
      Rng users = Rng::Derive(config.seed, "users", (d << 32) | p);
      const std::size_t n_users =
          users.UniformInt(config.users_per_poi.min, config.users_per_poi.max);
      const std::size_t n_names = 1 + poi.aliases.size();
      const std::size_t guaranteed = config.min_writers_per_name * n_names;
      for (std::size_t u = 0; u < n_users; ++u) {
        std::size_t which = 0;  // 0 = standard, k = alias k-1
        if (u < guaranteed) {
          which = u % n_names;
        } else if (n_names > 1 && !users.Bernoulli(config.standard_share)) {
          which = 1 + users.UniformInt(0, n_names - 2);
        }
        const std::string& intended =
            which == 0 ? poi.standard_name : poi.aliases[which - 1];
        std::string written = intended;
        if (u >= guaranteed && users.Bernoulli(config.typo_rate)) {
          for (int attempt = 0; attempt < 10; ++attempt) {
            std::string typo = MakeTypo(users, intended, which != 0);
            if (used_spellings.insert(typo).second) {
              truth.typo_variants.emplace(typo, intended);
              written = std::move(typo);
              break;
            }
          }
        }
        if (users.Bernoulli(config.noise_rate)) {
          written = AddNoise(users, written);
        }

        char id[48];
        std::snprintf(id, sizeof(id), "d%02zu-p%03zu-u%03zu", d + 1, p, u);
        corpus.addresses.push_back(
            {id, config.province, config.city, truth.name, written});

        Rng pts = Rng::Derive(config.seed, "points",
                              (static_cast<std::uint64_t>(d) << 48) |
                                  (static_cast<std::uint64_t>(p) << 24) | u);
        std::vector<PlanarPoint> away;
        if (config.away_fraction > 0.0) {
          const std::size_t n_away = pts.UniformInt(
              config.away_places_per_user.min, config.away_places_per_user.max);
          for (std::size_t a = 0; a < n_away; ++a) {
            away.push_back({pts.Uniform(0.0, config.district_extent_m),
                            pts.Uniform(0.0, config.district_extent_m)});
          }
        }
        const std::size_t n_points = pts.UniformInt(
            config.points_per_user.min, config.points_per_user.max);
        auto& log = corpus.locations[id];
        for (std::size_t k = 0; k < n_points; ++k) {
          PlanarPoint center = sites[p];
          double scatter = config.home_scatter_m;
          if (!away.empty() && pts.Bernoulli(config.away_fraction)) {
            center = away[pts.UniformInt(0, away.size() - 1)];
            scatter = config.away_scatter_m;
          }
          const double dx = pts.Normal() * scatter;
          const double dy = pts.Normal() * scatter;
          log.push_back(
              UnprojectLocal({center.x + dx, center.y + dy}, truth.origin));
        }
      }
    }

    // Exhaustive labels over (standard, alias) pairs of the district.
    auto& registry = corpus.standards[truth.name];
    for (std::size_t s = 0; s < truth.pois.size(); ++s) {
      registry.push_back(truth.pois[s].standard_name);
      for (std::size_t p = 0; p < truth.pois.size(); ++p) {
        for (const auto& alias : truth.pois[p].aliases) {
          corpus.labels.push_back(
              {truth.name, truth.pois[s].standard_name, alias, s == p});
        }
      }
    }
    city.truth.push_back(std::move(truth));
  }
  FinalizeCorpus(corpus);
  return city;
}

std::string TruthMetaJson(const SynthCity& city) {
  nlohmann::json meta;
  meta["planted_aliases"] = city.planted_aliases;
  meta["config"] = city.config.ToMap();
  nlohmann::json districts = nlohmann::json::array();
  for (const auto& d : city.truth) {
    nlohmann::json jd;
    jd["name"] = d.name;
    jd["origin"] = {{"lat", d.origin.lat}, {"lon", d.origin.lon}};
    nlohmann::json pois = nlohmann::json::array();
    for (const auto& p : d.pois) {
      pois.push_back({{"standard_name", p.standard_name},
                      {"aliases", p.aliases},
                      {"lat", p.location.lat},
                      {"lon", p.location.lon}});
    }
    jd["pois"] = std::move(pois);
    jd["typo_variants"] = d.typo_variants;
    districts.push_back(std::move(jd));
  }
  meta["districts"] = std::move(districts);
  return meta.dump(2) + "\n";
}

void WriteCity(const SynthCity& city, const std::filesystem::path& dir) {
  ArtifactSet out(dir);
  out.Add("addresses.csv", AddressRecordsToCsv(city.corpus.addresses));
  out.Add("locations.csv", LocationLogToCsv(city.corpus.locations));
  out.Add("labels.csv", LabelsToCsv(city.corpus.labels));
  out.Add("standards.csv", StandardsToCsv(city.corpus.standards));
  out.Add("truth_meta.json", TruthMetaJson(city));
  out.Commit();
}

}  // namespace poialias
