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

#ifndef POIALIAS_PROFILE_H_
#define POIALIAS_PROFILE_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "poialias/geo.h"
#include "poialias/ingestion.h"
#include "poialias/preprocess.h"

namespace poialias {

inline constexpr std::size_t kDefaultMinProfilePoints = 5;

// canonical POI name -> users who wrote it, for one district.
struct AssociatedUserIndex {
  std::map<std::string, std::set<std::string>> users;
};

// GPS points of every user associated with one POI name. Duplicates are kept:
// repeated visits add density.
struct MobilityProfile {
  std::string name;
  std::vector<GeoPoint> points;
  std::size_t user_count = 0;

  std::size_t point_count() const { return points.size(); }
  bool Insufficient(std::size_t min_points) const {
    return points.size() < min_points;
  }
};

// Names are resolved through CleanText and then `canonical`; unseen names map
// to their cleaned form. Records whose cleaned name is empty are skipped.
AssociatedUserIndex BuildAssociatedUsers(
    const std::vector<AddressRecord>& addresses, const CanonicalMap& canonical);

// Concatenates L(u) over the name's users in user-id order. Users without
// location data still count toward user_count. Throws kNotFound if `name` is
// not indexed.
MobilityProfile BuildMobilityProfile(const std::string& name,
                                     const AssociatedUserIndex& index,
                                     const LocationLog& locations);

}  // namespace poialias

#endif  // POIALIAS_PROFILE_H_
