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

#ifndef POIALIAS_GEO_H_
#define POIALIAS_GEO_H_

#include <cstddef>
#include <span>
#include <vector>

namespace poialias {

// Mean Earth radius used for every spherical computation in the library.
inline constexpr double kEarthRadiusM = 6371000.0;
// Meters per degree of arc on that sphere.
inline constexpr double kMetersPerDegree =
    3.14159265358979323846 / 180.0 * kEarthRadiusM;

// Latitude/longitude in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

// True when both coordinates are finite and inside their valid ranges.
bool IsValidGeoPoint(const GeoPoint& p);

// Meters east (x) and north (y) of a projection origin.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PlanarPoint&) const = default;
};

// An axis-aligned square [x0, x0 + side] x [y0, y0 + side]. Both edges are
// closed, so a point lying on the upper edge is covered.
struct Window {
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 0.0;
  std::size_t count = 0;

  bool Covers(const PlanarPoint& p) const {
    return x0 <= p.x && p.x <= x0 + side && y0 <= p.y && p.y <= y0 + side;
  }
};

// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double Haversine(const GeoPoint& p, const GeoPoint& q);

// Arithmetic mean of latitudes and of longitudes. Throws on empty input.
GeoPoint Centroid(std::span<const GeoPoint> points);

// Equirectangular projection about `origin`. Accurate to well under a
// percent within about one degree of the origin.
PlanarPoint ProjectLocal(const GeoPoint& p, const GeoPoint& origin);
std::vector<PlanarPoint> ProjectLocal(std::span<const GeoPoint> points,
                                      const GeoPoint& origin);
GeoPoint UnprojectLocal(const PlanarPoint& p, const GeoPoint& origin);

// Finds the side x side window covering the most points.
//
// Among all optimal windows, returns the one whose corner is
// lexicographically smallest (x0 first, then y0) among corners of the form
// (p.x, q.y) for input points p, q. Runs in O(n log n): points are swept by x
// through a slab of width `side` while a max segment tree over the sorted
// distinct y values tracks, for each candidate bottom edge, how many slab
// points the window would cover.
//
// Throws on empty input or a non-positive side.
Window MaxCoverageWindow(std::span<const PlanarPoint> points, double side);

// Centroid of the points inside the max-coverage window of the given side
// (in meters), computed in a local projection about the overall centroid.
GeoPoint LocalRegionCentroid(std::span<const GeoPoint> points, double side_m);

}  // namespace poialias

#endif  // POIALIAS_GEO_H_
