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

#ifndef POIALIAS_DISCOVERY_H_
#define POIALIAS_DISCOVERY_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poialias/distribution.h"
#include "poialias/ingestion.h"
#include "poialias/preprocess.h"
#include "poialias/profile.h"

namespace poialias {

inline constexpr double kDefaultLocalWindowM = 640.0;
// Distances below this are clamped before inversion.
inline constexpr double kMinGeoDistanceM = 1.0;
// Divergences below this are floored before inversion.
inline constexpr double kMinDivergence = 1e-9;

enum class Method { kCentroid, kLocCent, kKl, kJaccard, kEditDistance };

// Accepts centroid, loccent (loc_cent), kl (kl_div), jaccard,
// editdist (edit_distance). Throws kInvalidArgument otherwise.
Method ParseMethod(std::string_view name);
const char* MethodName(Method method);
bool UsesProfiles(Method method);

struct MetricConfig {
  Method method = Method::kJaccard;
  // Pairs with score > threshold are aliases. For kEditDistance the score is
  // the negated normalized edit distance.
  double threshold = 0.0;
  double local_window_m = kDefaultLocalWindowM;
  std::size_t grid_n = kDefaultGridN;
  double kl_epsilon = kDefaultKlEpsilon;
  std::size_t min_profile_points = kDefaultMinProfilePoints;
  double bbox_padding = kDefaultBboxPadding;

  // Throws kInvalidArgument on an unusable combination.
  void Validate() const;
};

enum class Decision { kAlias, kNotAlias, kInsufficient };
const char* DecisionName(Decision d);

struct ScoredPair {
  std::size_t standard_index = 0;
  std::size_t candidate_index = 0;
  std::string standard_name;
  std::string candidate_name;
  std::optional<double> score;  // empty when either profile is insufficient
  Decision decision = Decision::kNotAlias;
};

// Sparse N x M boolean matrix of inferred (standard, candidate) links.
struct AliasMatrix {
  std::string district;
  std::vector<std::string> standard_names;
  std::vector<std::string> candidate_names;
  std::set<std::pair<std::size_t, std::size_t>> links;

  bool Has(std::size_t i, std::size_t j) const { return links.count({i, j}) > 0; }
};

// 1 / max(meters, 1 m).
double SimilarityFromDistance(double meters);
// 1 / max(divergence, 1e-9).
double SimilarityFromDivergence(double divergence);

enum class Estimator { kOverall, kLocal };
enum class Divergence { kKl, kJaccard };

// kappa_d over the overall or local-region centroid of each profile. Empty
// result when either profile has fewer than `min_points` points.
std::optional<double> SimilarityDistanceBased(
    const MobilityProfile& a, const MobilityProfile& b, Estimator estimator,
    double local_window_m = kDefaultLocalWindowM,
    std::size_t min_points = kDefaultMinProfilePoints);

// kappa_p over the rasterized distributions of each profile.
std::optional<double> SimilarityDistributionBased(
    const MobilityProfile& a, const MobilityProfile& b, Divergence divergence,
    const BoundingBox& bbox, std::size_t n_grid = kDefaultGridN,
    double epsilon = kDefaultKlEpsilon,
    std::size_t min_points = kDefaultMinProfilePoints);

struct DiscoveryResult {
  AliasMatrix matrix;
  std::vector<ScoredPair> pairs;  // all N * M pairs, ordered by (i, j)
  std::size_t insufficient_pairs = 0;
};

// Scores every (standard, candidate) pair and applies the strict threshold.
// Distribution methods rasterize over the padded extent of all given
// profiles unless `bbox` is supplied.
DiscoveryResult InferAliasMatrix(
    const std::string& district, const std::vector<MobilityProfile>& standards,
    const std::vector<MobilityProfile>& candidates, const MetricConfig& config,
    const std::optional<BoundingBox>& bbox = std::nullopt);

// Re-decides every scored pair against a new threshold.
void ApplyThreshold(DiscoveryResult& result, double threshold);

// (standard, candidate) -> is_alias for one district, keyed by canonical names.
using PairLabels = std::map<std::pair<std::string, std::string>, bool>;

// One district after cleaning, clustering and profiling.
struct DistrictData {
  std::string district;
  CanonicalMap canonical;
  std::vector<MobilityProfile> standards;   // registry order, by name
  std::vector<MobilityProfile> candidates;  // by name
  PairLabels labels;
  std::size_t orphan_labels = 0;
};

// Builds the district's canonical map (clustering cleaned names weighted by
// address count), splits canonical names into registered standards and
// candidates, builds their profiles and canonicalizes the labels. A
// registered standard that no address mentions gets an empty profile.
DistrictData PrepareDistrict(const Corpus& corpus, const std::string& district,
                             double cluster_threshold = kDefaultClusterThreshold);

std::vector<DistrictData> PrepareCity(
    const Corpus& corpus, double cluster_threshold = kDefaultClusterThreshold);

}  // namespace poialias

#endif  // POIALIAS_DISCOVERY_H_
