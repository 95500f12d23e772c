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

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "poialias/error.h"
#include "poialias/preprocess.h"
#include "poialias/profile.h"

namespace poialias {
namespace {

AddressRecord Addr(const std::string& user, const std::string& name) {
  return {user, "Jiangsu", "Suzhou", "D1", name};
}

bool SameMultiset(std::vector<GeoPoint> a, std::vector<GeoPoint> b) {
  auto less = [](const GeoPoint& x, const GeoPoint& y) {
    return x.lat != y.lat ? x.lat < y.lat : x.lon < y.lon;
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

TEST(AssociatedUsers, DirectConstruction) {
  const auto index = BuildAssociatedUsers(
      {Addr("u1", "A"), Addr("u2", "A"), Addr("u2", "B")}, CanonicalMap{});
  ASSERT_EQ(index.users.size(), 2u);
  EXPECT_EQ(index.users.at("a"), (std::set<std::string>{"u1", "u2"}));
  EXPECT_EQ(index.users.at("b"), (std::set<std::string>{"u2"}));
}

TEST(AssociatedUsers, SetSemantics) {
  const auto index =
      BuildAssociatedUsers({Addr("u1", "A"), Addr("u1", "A")}, CanonicalMap{});
  EXPECT_EQ(index.users.at("a").size(), 1u);
}

TEST(AssociatedUsers, MergesThroughCleaningAndCanonicalMap) {
  CanonicalMap map = ClusterNearDuplicates({{"xiguyayuan", 10}, {"xiguyyuan", 1}});
  const auto index = BuildAssociatedUsers(
      {Addr("u1", "A!"), Addr("u2", "a"), Addr("u3", "XiGu YaYuan"),
       Addr("u4", "xiguyyuan"), Addr("u5", " !! ")},
      map);
  EXPECT_EQ(index.users.at("a"), (std::set<std::string>{"u1", "u2"}));
  EXPECT_EQ(index.users.at("xiguyayuan"), (std::set<std::string>{"u3", "u4"}));
  EXPECT_EQ(index.users.size(), 2u);  // the empty name is skipped
}

TEST(MobilityProfile, MultisetUnion) {
  AssociatedUserIndex index;
  index.users["a"] = {"u1", "u2"};
  const GeoPoint p{31.3, 120.5}, q{31.4, 120.6};
  LocationLog log;
  log["u1"] = {p, q};
  log["u2"] = {q};
  const auto profile = BuildMobilityProfile("a", index, log);
  EXPECT_EQ(profile.user_count, 2u);
  EXPECT_EQ(profile.point_count(), 3u);
  EXPECT_TRUE(SameMultiset(profile.points, {p, q, q}));
}

TEST(MobilityProfile, UserWithoutLocations) {
  AssociatedUserIndex index;
  index.users["b"] = {"u3"};
  const auto profile = BuildMobilityProfile("b", index, LocationLog{});
  EXPECT_EQ(profile.point_count(), 0u);
  EXPECT_EQ(profile.user_count, 1u);
  EXPECT_TRUE(profile.Insufficient(kDefaultMinProfilePoints));
}

TEST(MobilityProfile, UnknownNameThrows) {
  EXPECT_THROW(BuildMobilityProfile("zzz", AssociatedUserIndex{}, LocationLog{}),
               Error);
}

TEST(MobilityProfile, CountOracle) {
  AssociatedUserIndex index;
  LocationLog log;
  std::size_t expected = 0;
  std::mt19937_64 rng(1);
  for (int u = 0; u < 10; ++u) {
    const std::string id = "u" + std::to_string(u);
    index.users["a"].insert(id);
    for (int k = 0; k < 7; ++k) {
      log[id].push_back({30.0 + u, 120.0 + k + 0.001 * (rng() % 10)});
      ++expected;
    }
  }
  EXPECT_EQ(BuildMobilityProfile("a", index, log).point_count(), 70u);
  EXPECT_EQ(expected, 70u);
}

TEST(MobilityProfile, MonotoneInUsers) {
  AssociatedUserIndex index;
  LocationLog log;
  log["u1"] = {{1, 1}, {2, 2}};
  log["u2"] = {{3, 3}};
  index.users["a"] = {"u1"};
  const auto before = BuildMobilityProfile("a", index, log);
  index.users["a"].insert("u2");
  const auto after = BuildMobilityProfile("a", index, log);
  EXPECT_GE(after.point_count(), before.point_count());
  for (const auto& p : before.points) {
    EXPECT_NE(std::find(after.points.begin(), after.points.end(), p),
              after.points.end());
  }
}

TEST(MobilityProfile, InsufficientBoundary) {
  MobilityProfile p;
  p.points.resize(4);
  EXPECT_TRUE(p.Insufficient(5));
  p.points.resize(5);
  EXPECT_FALSE(p.Insufficient(5));
}

}  // namespace
}  // namespace poialias
