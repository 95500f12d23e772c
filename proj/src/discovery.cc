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

#include "poialias/discovery.h"

#include <algorithm>
#include <cmath>
#include <variant>

#include "poialias/error.h"
#include "poialias/geo.h"
#include "poialias/log.h"
#include "poialias/parallel.h"

namespace poialias {

namespace {

// Per-profile quantity the pairwise score is computed from.
using Feature = std::variant<std::monostate, GeoPoint, Distribution>;

Feature ComputeFeature(const MobilityProfile& profile,
                       const MetricConfig& config, const BoundingBox* bbox) {
  if (profile.Insufficient(config.min_profile_points) ||
      profile.points.empty()) {
    return std::monostate{};
  }
  switch (config.method) {
    case Method::kCentroid:
      return Centroid(profile.points);
    case Method::kLocCent:
      return LocalRegionCentroid(profile.points, config.local_window_m);
    case Method::kKl:
    case Method::kJaccard:
      return Normalize(Rasterize(profile, *bbox, config.grid_n).matrix);
    case Method::kEditDistance:
      break;
  }
  return std::monostate{};
}

std::optional<double> ScoreFeatures(const Feature& a, const Feature& b,
                                    const MetricConfig& config) {
  if (std::holds_alternative<std::monostate>(a) ||
      std::holds_alternative<std::monostate>(b)) {
    return std::nullopt;
  }
  switch (config.method) {
    case Method::kCentroid:
    case Method::kLocCent:
      return SimilarityFromDistance(
          Haversine(std::get<GeoPoint>(a), std::get<GeoPoint>(b)));
    case Method::kKl:
      return SimilarityFromDivergence(KlDivergence(
          std::get<Distribution>(a), std::get<Distribution>(b),
          config.kl_epsilon));
    case Method::kJaccard:
      return SimilarityFromDivergence(JaccardDistance(
          std::get<Distribution>(a), std::get<Distribution>(b)));
    case Method::kEditDistance:
      break;
  }
  return std::nullopt;
}

Decision Decide(const std::optional<double>& score, double threshold) {
  if (!score) return Decision::kInsufficient;
  return *score > threshold ? Decision::kAlias : Decision::kNotAlias;
}

}  // namespace

Method ParseMethod(std::string_view name) {
  if (name == "centroid") return Method::kCentroid;
  if (name == "loccent" || name == "loc_cent") return Method::kLocCent;
  if (name == "kl" || name == "kl_div") return Method::kKl;
  if (name == "jaccard") return Method::kJaccard;
  if (name == "editdist" || name == "edit_distance") {
    return Method::kEditDistance;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown method '" + std::string(name) +
                  "' (expected centroid|loccent|kl|jaccard|editdist)");
}

const char* MethodName(Method method) {
  switch (method) {
    case Method::kCentroid: return "centroid";
    case Method::kLocCent: return "loccent";
    case Method::kKl: return "kl";
    case Method::kJaccard: return "jaccard";
    case Method::kEditDistance: return "editdist";
  }
  return "unknown";
}

bool UsesProfiles(Method method) { return method != Method::kEditDistance; }

const char* DecisionName(Decision d) {
  switch (d) {
    case Decision::kAlias: return "alias";
    case Decision::kNotAlias: return "not-alias";
    case Decision::kInsufficient: return "insufficient";
  }
  return "unknown";
}

void MetricConfig::Validate() const {
  if (!std::isfinite(threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be finite");
  }
  if (method == Method::kLocCent &&
      (!(local_window_m > 0.0) || !std::isfinite(local_window_m))) {
    throw Error(ErrorCode::kInvalidArgument,
                "local window size must be positive");
  }
  if ((method == Method::kKl || method == Method::kJaccard) &&
      (grid_n == 0 || grid_n > 65535)) {
    throw Error(ErrorCode::kInvalidArgument, "grid_n must lie in [1, 65535]");
  }
  if (method == Method::kKl && !(kl_epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "kl_epsilon must be positive");
  }
  if (min_profile_points == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "min_profile_points must be at least 1");
  }
  if (!(bbox_padding >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bbox_padding must be >= 0");
  }
}

double SimilarityFromDistance(double meters) {
  return 1.0 / std::max(meters, kMinGeoDistanceM);
}

double SimilarityFromDivergence(double divergence) {
  return 1.0 / std::max(divergence, kMinDivergence);
}

std::optional<double> SimilarityDistanceBased(const MobilityProfile& a,
                                              const MobilityProfile& b,
                                              Estimator estimator,
                                              double local_window_m,
                                              std::size_t min_points) {
  MetricConfig config;
  config.method =
      estimator == Estimator::kOverall ? Method::kCentroid : Method::kLocCent;
  config.local_window_m = local_window_m;
  config.min_profile_points = std::max<std::size_t>(min_points, 1);
  config.Validate();
  return ScoreFeatures(ComputeFeature(a, config, nullptr),
                       ComputeFeature(b, config, nullptr), config);
}

std::optional<double> SimilarityDistributionBased(
    const MobilityProfile& a, const MobilityProfile& b, Divergence divergence,
    const BoundingBox& bbox, std::size_t n_grid, double epsilon,
    std::size_t min_points) {
  MetricConfig config;
  config.method =
      divergence == Divergence::kKl ? Method::kKl : Method::kJaccard;
  config.grid_n = n_grid;
  config.kl_epsilon = epsilon;
  config.min_profile_points = std::max<std::size_t>(min_points, 1);
  config.Validate();
  return ScoreFeatures(ComputeFeature(a, config, &bbox),
                       ComputeFeature(b, config, &bbox), config);
}

DiscoveryResult InferAliasMatrix(const std::string& district,
                                 const std::vector<MobilityProfile>& standards,
                                 const std::vector<MobilityProfile>& candidates,
                                 const MetricConfig& config,
                                 const std::optional<BoundingBox>& bbox) {
  config.Validate();
  DiscoveryResult result;
  result.matrix.district = district;
  for (const auto& p : standards) result.matrix.standard_names.push_back(p.name);
  for (const auto& p : candidates) {
    result.matrix.candidate_names.push_back(p.name);
  }
  const std::size_t n = standards.size(), m = candidates.size();
  result.pairs.resize(n * m);

  std::vector<Feature> std_features(n), cand_features(m);
  std::optional<BoundingBox> box = bbox;
  if (config.method == Method::kKl || config.method == Method::kJaccard) {
    if (!box) {
      std::vector<GeoPoint> all;
      for (const auto* set : {&standards, &candidates}) {
        for (const auto& p : *set) {
          all.insert(all.end(), p.points.begin(), p.points.end());
        }
      }
      if (!all.empty()) box = BoundingBoxOf(all, config.bbox_padding);
    }
  }
  if (UsesProfiles(config.method)) {
    const BoundingBox* box_ptr = box ? &*box : nullptr;
    ParallelFor(n + m, [&](std::size_t k) {
      if (k < n) {
        std_features[k] = ComputeFeature(standards[k], config, box_ptr);
      } else {
        cand_features[k - n] = ComputeFeature(candidates[k - n], config, box_ptr);
      }
    });
  }

  ParallelFor(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) {
      ScoredPair& pair = result.pairs[i * m + j];
      pair.standard_index = i;
      pair.candidate_index = j;
      pair.standard_name = standards[i].name;
      pair.candidate_name = candidates[j].name;
      if (config.method == Method::kEditDistance) {
        pair.score =
            -NormalizedEditDistance(standards[i].name, candidates[j].name);
      } else {
        pair.score = ScoreFeatures(std_features[i], cand_features[j], config);
      }
    }
  });
  ApplyThreshold(result, config.threshold);
  return result;
}

void ApplyThreshold(DiscoveryResult& result, double threshold) {
  result.matrix.links.clear();
  result.insufficient_pairs = 0;
  for (auto& pair : result.pairs) {
    pair.decision = Decide(pair.score, threshold);
    if (pair.decision == Decision::kAlias) {
      result.matrix.links.emplace(pair.standard_index, pair.candidate_index);
    } else if (pair.decision == Decision::kInsufficient) {
      ++result.insufficient_pairs;
    }
  }
}

DistrictData PrepareDistrict(const Corpus& corpus, const std::string& district,
                             double cluster_threshold) {
  DistrictData data;
  data.district = district;

  std::vector<AddressRecord> records;
  std::map<std::string, std::size_t> freq;
  for (const auto& r : corpus.addresses) {
    if (r.district != district) continue;
    records.push_back(r);
    std::string cleaned = CleanText(r.poi_name);
    if (!cleaned.empty()) ++freq[std::move(cleaned)];
  }
  if (!freq.empty()) {
    data.canonical = ClusterNearDuplicates(
        std::vector<std::pair<std::string, std::size_t>>(freq.begin(),
                                                         freq.end()),
        cluster_threshold);
  }
  const AssociatedUserIndex index = BuildAssociatedUsers(records, data.canonical);

  auto canonicalize = [&](const std::string& raw) {
    return data.canonical.Resolve(CleanText(raw));
  };

  std::set<std::string> standard_names;
  if (const auto it = corpus.standards.find(district);
      it != corpus.standards.end()) {
    for (const auto& raw : it->second) {
      std::string name = canonicalize(raw);
      if (!name.empty()) standard_names.insert(std::move(name));
    }
  }
  std::set<std::string> candidate_names;
  for (const auto& [name, users] : index.users) {
    if (!standard_names.count(name)) candidate_names.insert(name);
  }

  data.standards.resize(standard_names.size());
  data.candidates.resize(candidate_names.size());
  const std::vector<std::string> std_list(standard_names.begin(),
                                          standard_names.end());
  const std::vector<std::string> cand_list(candidate_names.begin(),
                                           candidate_names.end());
  ParallelFor(std_list.size() + cand_list.size(), [&](std::size_t k) {
    const bool is_std = k < std_list.size();
    const std::string& name =
        is_std ? std_list[k] : cand_list[k - std_list.size()];
    MobilityProfile profile;
    if (index.users.count(name)) {
      profile = BuildMobilityProfile(name, index, corpus.locations);
    } else {
      profile.name = name;
    }
    if (is_std) {
      data.standards[k] = std::move(profile);
    } else {
      data.candidates[k - std_list.size()] = std::move(profile);
    }
  });

  for (const auto& label : corpus.labels) {
    if (label.district != district) continue;
    const std::string s = canonicalize(label.standard_name);
    const std::string c = canonicalize(label.candidate_name);
    if (!standard_names.count(s) || !candidate_names.count(c)) {
      ++data.orphan_labels;
      continue;
    }
    auto [it, inserted] = data.labels.emplace(std::make_pair(s, c), label.is_alias);
    if (!inserted) it->second = it->second || label.is_alias;
  }
  Log(LogLevel::kDebug, "district_prepared",
      {{"district", district},
       {"raw_names", std::to_string(freq.size())},
       {"canonical_names", std::to_string(data.canonical.CanonicalCount())},
       {"standards", std::to_string(data.standards.size())},
       {"candidates", std::to_string(data.candidates.size())},
       {"labels", std::to_string(data.labels.size())},
       {"orphan_labels", std::to_string(data.orphan_labels)}});
  return data;
}

std::vector<DistrictData> PrepareCity(const Corpus& corpus,
                                      double cluster_threshold) {
  std::vector<DistrictData> out;
  for (const auto& district : corpus.districts) {
    out.push_back(PrepareDistrict(corpus, district, cluster_threshold));
  }
  return out;
}

}  // namespace poialias
