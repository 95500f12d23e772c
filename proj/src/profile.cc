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

#include "poialias/profile.h"

#include "poialias/error.h"

namespace poialias {

AssociatedUserIndex BuildAssociatedUsers(
    const std::vector<AddressRecord>& addresses,
    const CanonicalMap& canonical) {
  AssociatedUserIndex index;
  for (const auto& rec : addresses) {
    const std::string cleaned = CleanText(rec.poi_name);
    if (cleaned.empty()) continue;
    index.users[canonical.Resolve(cleaned)].insert(rec.user_id);
  }
  return index;
}

MobilityProfile BuildMobilityProfile(const std::string& name,
                                     const AssociatedUserIndex& index,
                                     const LocationLog& locations) {
  const auto it = index.users.find(name);
  if (it == index.users.end()) {
    throw Error(ErrorCode::kNotFound, "no associated users for '" + name + "'");
  }
  MobilityProfile profile;
  profile.name = name;
  profile.user_count = it->second.size();
  std::size_t total = 0;
  for (const auto& user : it->second) {
    const auto loc = locations.find(user);
    if (loc != locations.end()) total += loc->second.size();
  }
  profile.points.reserve(total);
  for (const auto& user : it->second) {
    const auto loc = locations.find(user);
    if (loc == locations.end()) continue;
    profile.points.insert(profile.points.end(), loc->second.begin(),
                          loc->second.end());
  }
  return profile;
}

}  // namespace poialias
