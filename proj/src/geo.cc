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

#include "poialias/geo.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "poialias/error.h"

namespace poialias {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Max segment tree with range add. Each node stores the maximum of its
// subtree including its own pending add, so the root is always current.
class MaxAddTree {
 public:
  explicit MaxAddTree(std::size_t size)
      : size_(size), max_(4 * size, 0), add_(4 * size, 0) {}

  void Add(std::size_t lo, std::size_t hi, int delta) {
    Add(1, 0, size_ - 1, lo, hi, delta);
  }

  int Max() const { return max_[1]; }

  // Smallest leaf index holding the maximum.
  std::size_t ArgMax() const {
    std::size_t node = 1, lo = 0, hi = size_ - 1;
    while (lo < hi) {
      const int target = max_[node] - add_[node];
      const std::size_t mid = (lo + hi) / 2;
      if (max_[2 * node] == target) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  void Add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t qlo,
           std::size_t qhi, int delta) {
    if (qhi < lo || hi < qlo) return;
    if (qlo <= lo && hi <= qhi) {
      max_[node] += delta;
      add_[node] += delta;
      return;
    }
    const std::size_t mid = (lo + hi) / 2;
    Add(2 * node, lo, mid, qlo, qhi, delta);
    Add(2 * node + 1, mid + 1, hi, qlo, qhi, delta);
    max_[node] = std::max(max_[2 * node], max_[2 * node + 1]) + add_[node];
  }

  std::size_t size_;
  std::vector<int> max_;
  std::vector<int> add_;
};

}  // namespace

bool IsValidGeoPoint(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double Haversine(const GeoPoint& p, const GeoPoint& q) {
  const double phi1 = p.lat * kDegToRad;
  const double phi2 = q.lat * kDegToRad;
  const double dphi = (q.lat - p.lat) * kDegToRad;
  const double dlambda = (q.lon - p.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2);
  const double s2 = std::sin(dlambda / 2);
  const double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

GeoPoint Centroid(std::span<const GeoPoint> points) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "centroid of empty point set");
  }
  double lat = 0.0, lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const double n = static_cast<double>(points.size());
  return {lat / n, lon / n};
}

PlanarPoint ProjectLocal(const GeoPoint& p, const GeoPoint& origin) {
  const double cos_lat0 = std::cos(origin.lat * kDegToRad);
  return {(p.lon - origin.lon) * cos_lat0 * kMetersPerDegree,
          (p.lat - origin.lat) * kMetersPerDegree};
}

std::vector<PlanarPoint> ProjectLocal(std::span<const GeoPoint> points,
                                      const GeoPoint& origin) {
  std::vector<PlanarPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(ProjectLocal(p, origin));
  return out;
}

GeoPoint UnprojectLocal(const PlanarPoint& p, const GeoPoint& origin) {
  const double cos_lat0 = std::cos(origin.lat * kDegToRad);
  return {origin.lat + p.y / kMetersPerDegree,
          origin.lon + p.x / (cos_lat0 * kMetersPerDegree)};
}

Window MaxCoverageWindow(std::span<const PlanarPoint> points, double side) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "max-coverage window of empty point set");
  }
  if (!(side > 0.0) || !std::isfinite(side)) {
    throw Error(ErrorCode::kInvalidArgument,
                "window side must be positive and finite");
  }

  std::vector<double> ys;
  ys.reserve(points.size());
  for (const auto& p : points) ys.push_back(p.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // For each point, the range of candidate bottom edges ys[k] whose window
  // covers it vertically: ys[k] <= p.y <= ys[k] + side. Both predicates are
  // monotone in k, so the range is contiguous.
  struct Slab {
    double x;
    std::size_t lo;
    std::size_t hi;
  };
  std::vector<Slab> by_x;
  by_x.reserve(points.size());
  for (const auto& p : points) {
    const auto lo = std::partition_point(
        ys.begin(), ys.end(), [&](double y) { return y + side < p.y; });
    const auto hi = std::upper_bound(ys.begin(), ys.end(), p.y);
    by_x.push_back({p.x, static_cast<std::size_t>(lo - ys.begin()),
                    static_cast<std::size_t>(hi - ys.begin()) - 1});
  }
  std::sort(by_x.begin(), by_x.end(),
            [](const Slab& a, const Slab& b) { return a.x < b.x; });

  MaxAddTree tree(ys.size());
  Window best{by_x.front().x, ys.front(), side, 0};
  std::size_t enter = 0, leave = 0;
  for (std::size_t i = 0; i < by_x.size(); ++i) {
    if (i > 0 && by_x[i].x == by_x[i - 1].x) continue;
    const double x0 = by_x[i].x;
    const double x1 = x0 + side;
    while (enter < by_x.size() && by_x[enter].x <= x1) {
      tree.Add(by_x[enter].lo, by_x[enter].hi, +1);
      ++enter;
    }
    while (leave < enter && by_x[leave].x < x0) {
      tree.Add(by_x[leave].lo, by_x[leave].hi, -1);
      ++leave;
    }
    const int count = tree.Max();
    if (static_cast<std::size_t>(count) > best.count) {
      best.x0 = x0;
      best.y0 = ys[tree.ArgMax()];
      best.count = static_cast<std::size_t>(count);
    }
  }
  return best;
}

GeoPoint LocalRegionCentroid(std::span<const GeoPoint> points, double side_m) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "local-region centroid of empty point set");
  }
  // Canonical order makes every floating-point sum independent of the input
  // permutation.
  std::vector<GeoPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const GeoPoint& a,
                                             const GeoPoint& b) {
    return a.lat != b.lat ? a.lat < b.lat : a.lon < b.lon;
  });
  const GeoPoint origin = Centroid(sorted);
  const std::vector<PlanarPoint> planar = ProjectLocal(sorted, origin);
  const Window window = MaxCoverageWindow(planar, side_m);

  std::vector<GeoPoint> covered;
  covered.reserve(window.count);
  for (std::size_t i = 0; i < planar.size(); ++i) {
    if (window.Covers(planar[i])) covered.push_back(sorted[i]);
  }
  return Centroid(covered);
}

}  // namespace poialias
