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

#include "poialias/distribution.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "poialias/error.h"

namespace poialias {

namespace {

void CheckSameGrid(const Distribution& p, const Distribution& q) {
  if (p.n_grid() != q.n_grid() || !(p.bbox() == q.bbox())) {
    throw Error(ErrorCode::kInvalidArgument,
                "distributions are defined on different grids");
  }
}

std::size_t AxisIndex(double v, double lo, double hi, std::size_t n) {
  const double t = (v - lo) / (hi - lo);
  const auto idx = static_cast<std::size_t>(std::floor(t * static_cast<double>(n)));
  return std::min(idx, n - 1);
}

}  // namespace

BoundingBox BoundingBoxOf(std::span<const GeoPoint> points, double padding) {
  if (points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bounding box of empty point set");
  }
  BoundingBox b{points[0].lat, points[0].lat, points[0].lon, points[0].lon};
  for (const auto& p : points) {
    b.min_lat = std::min(b.min_lat, p.lat);
    b.max_lat = std::max(b.max_lat, p.lat);
    b.min_lon = std::min(b.min_lon, p.lon);
    b.max_lon = std::max(b.max_lon, p.lon);
  }
  // About 1 m of arc; keeps a single-point box valid.
  constexpr double kMinPad = 1e-5;
  const double pad_lat =
      std::max((b.max_lat - b.min_lat) * padding, kMinPad);
  const double pad_lon =
      std::max((b.max_lon - b.min_lon) * padding, kMinPad);
  b.min_lat -= pad_lat;
  b.max_lat += pad_lat;
  b.min_lon -= pad_lon;
  b.max_lon += pad_lon;
  return b;
}

bool CellOf(const GeoPoint& p, const BoundingBox& bbox, std::size_t n_grid,
            std::size_t& row, std::size_t& col) {
  if (!bbox.Contains(p)) return false;
  row = AxisIndex(p.lat, bbox.min_lat, bbox.max_lat, n_grid);
  col = AxisIndex(p.lon, bbox.min_lon, bbox.max_lon, n_grid);
  return true;
}

DensityMatrix::DensityMatrix(
    BoundingBox bbox, std::size_t n_grid,
    std::vector<std::pair<std::uint32_t, std::uint64_t>> cells)
    : bbox_(bbox), n_grid_(n_grid), cells_(std::move(cells)) {
  for (const auto& [cell, count] : cells_) total_ += count;
}

std::uint64_t DensityMatrix::At(std::size_t row, std::size_t col) const {
  const auto key = static_cast<std::uint32_t>(row * n_grid_ + col);
  const auto it = std::lower_bound(
      cells_.begin(), cells_.end(), key,
      [](const auto& entry, std::uint32_t k) { return entry.first < k; });
  return it != cells_.end() && it->first == key ? it->second : 0;
}

std::vector<std::uint64_t> DensityMatrix::Dense() const {
  std::vector<std::uint64_t> out(n_grid_ * n_grid_, 0);
  for (const auto& [cell, count] : cells_) out[cell] = count;
  return out;
}

std::string DensityMatrix::ToCsv() const {
  std::string out = "row,col,count\n";
  for (const auto& [cell, count] : cells_) {
    out += std::to_string(cell / n_grid_) + "," +
           std::to_string(cell % n_grid_) + "," + std::to_string(count) + "\n";
  }
  return out;
}

Rasterization Rasterize(std::span<const GeoPoint> points,
                        const BoundingBox& bbox, std::size_t n_grid) {
  if (n_grid == 0 ||
      n_grid > static_cast<std::size_t>(std::numeric_limits<std::uint16_t>::max())) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid size must lie in [1, 65535]");
  }
  if (!bbox.Valid()) {
    throw Error(ErrorCode::kInvalidArgument, "degenerate bounding box");
  }
  std::vector<std::uint32_t> keys;
  keys.reserve(points.size());
  std::size_t dropped = 0;
  for (const auto& p : points) {
    std::size_t r, c;
    if (!CellOf(p, bbox, n_grid, r, c)) {
      ++dropped;
      continue;
    }
    keys.push_back(static_cast<std::uint32_t>(r * n_grid + c));
  }
  if (keys.empty()) {
    throw Error(ErrorCode::kOutOfRange,
                "no point falls inside the bounding box");
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<std::uint32_t, std::uint64_t>> cells;
  for (std::uint32_t k : keys) {
    if (!cells.empty() && cells.back().first == k) {
      ++cells.back().second;
    } else {
      cells.emplace_back(k, 1);
    }
  }
  return {DensityMatrix(bbox, n_grid, std::move(cells)), dropped};
}

Rasterization Rasterize(const MobilityProfile& profile, const BoundingBox& bbox,
                        std::size_t n_grid) {
  return Rasterize(std::span<const GeoPoint>(profile.points), bbox, n_grid);
}

Distribution::Distribution(BoundingBox bbox, std::size_t n_grid,
                           std::vector<std::pair<std::uint32_t, double>> cells)
    : bbox_(bbox), n_grid_(n_grid), cells_(std::move(cells)) {}

Distribution Distribution::FromDense(std::span<const double> probs,
                                     std::size_t n_grid,
                                     const BoundingBox& bbox) {
  if (probs.size() != n_grid * n_grid) {
    throw Error(ErrorCode::kInvalidArgument,
                "dense grid size does not match n_grid^2");
  }
  std::vector<std::pair<std::uint32_t, double>> cells;
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "probabilities must be finite and non-negative");
    }
    sum += probs[i];
    if (probs[i] > 0.0) cells.emplace_back(static_cast<std::uint32_t>(i), probs[i]);
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "probabilities must sum to 1");
  }
  return Distribution(bbox, n_grid, std::move(cells));
}

double Distribution::At(std::size_t row, std::size_t col) const {
  const auto key = static_cast<std::uint32_t>(row * n_grid_ + col);
  const auto it = std::lower_bound(
      cells_.begin(), cells_.end(), key,
      [](const auto& entry, std::uint32_t k) { return entry.first < k; });
  return it != cells_.end() && it->first == key ? it->second : 0.0;
}

std::vector<double> Distribution::Dense() const {
  std::vector<double> out(n_grid_ * n_grid_, 0.0);
  for (const auto& [cell, prob] : cells_) out[cell] = prob;
  return out;
}

Distribution Normalize(const DensityMatrix& m) {
  if (m.total() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot normalize an empty density matrix");
  }
  const double total = static_cast<double>(m.total());
  std::vector<std::pair<std::uint32_t, double>> cells;
  cells.reserve(m.cells().size());
  for (const auto& [cell, count] : m.cells()) {
    cells.emplace_back(cell, static_cast<double>(count) / total);
  }
  return Distribution(m.bbox(), m.n_grid(), std::move(cells));
}

double KlDivergence(const Distribution& p, const Distribution& q,
                    double epsilon) {
  CheckSameGrid(p, q);
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  const double cells = static_cast<double>(p.n_grid() * p.n_grid());
  const double norm = 1.0 + cells * epsilon;
  // Both smoothed grids share the normalizer, so it cancels inside the log.
  auto term = [&](double pv, double qv) {
    const double ps = pv + epsilon;
    return ps / norm * std::log(ps / (qv + epsilon));
  };
  double sum = 0.0;
  const auto& a = p.cells();
  const auto& b = q.cells();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      sum += term(a[i].second, 0.0);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      sum += term(0.0, b[j].second);
      ++j;
    } else {
      sum += term(a[i].second, b[j].second);
      ++i;
      ++j;
    }
  }
  return std::max(0.0, sum);
}

double JaccardOverlap(const Distribution& p, const Distribution& q) {
  CheckSameGrid(p, q);
  double shared = 0.0, total = 0.0;
  const auto& a = p.cells();
  const auto& b = q.cells();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      total += a[i].second;
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      total += b[j].second;
      ++j;
    } else {
      const double both = a[i].second + b[j].second;
      shared += both;
      total += both;
      ++i;
      ++j;
    }
  }
  if (total <= 0.0) return 0.0;
  return std::min(1.0, shared / total);
}

double JaccardDistance(const Distribution& p, const Distribution& q) {
  return 1.0 - JaccardOverlap(p, q);
}

}  // namespace poialias
