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

#ifndef POIALIAS_DISTRIBUTION_H_
#define POIALIAS_DISTRIBUTION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "poialias/geo.h"
#include "poialias/profile.h"

namespace poialias {

inline constexpr std::size_t kDefaultGridN = 50;
inline constexpr double kDefaultKlEpsilon = 1e-9;
inline constexpr double kDefaultBboxPadding = 0.01;

struct BoundingBox {
  double min_lat = 0.0;
  double max_lat = 0.0;
  double min_lon = 0.0;
  double max_lon = 0.0;

  bool Valid() const { return min_lat < max_lat && min_lon < max_lon; }
  bool Contains(const GeoPoint& p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon &&
           p.lon <= max_lon;
  }
  bool operator==(const BoundingBox&) const = default;
};

// Extent of `points`, grown by `padding` times the extent on every side.
// Degenerate extents are widened so the box is always valid. Throws on empty
// input.
BoundingBox BoundingBoxOf(std::span<const GeoPoint> points,
                          double padding = kDefaultBboxPadding);

// Row/column of the cell containing `p`: rows split latitude, columns split
// longitude, cells are half-open except the last row/column which also take
// the box's upper edge. Returns false for points outside the box.
bool CellOf(const GeoPoint& p, const BoundingBox& bbox, std::size_t n_grid,
            std::size_t& row, std::size_t& col);

// N x N point counts over a bounding box. Storage is sparse (sorted by
// row-major cell index); At() and Dense() expose the full grid.
class DensityMatrix {
 public:
  DensityMatrix(BoundingBox bbox, std::size_t n_grid,
                std::vector<std::pair<std::uint32_t, std::uint64_t>> cells);

  const BoundingBox& bbox() const { return bbox_; }
  std::size_t n_grid() const { return n_grid_; }
  std::uint64_t total() const { return total_; }
  const std::vector<std::pair<std::uint32_t, std::uint64_t>>& cells() const {
    return cells_;
  }

  std::uint64_t At(std::size_t row, std::size_t col) const;
  std::vector<std::uint64_t> Dense() const;

  // `row,col,count` lines for non-empty cells, with header.
  std::string ToCsv() const;

 private:
  BoundingBox bbox_;
  std::size_t n_grid_;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> cells_;
  std::uint64_t total_ = 0;
};

struct Rasterization {
  DensityMatrix matrix;
  std::size_t dropped = 0;  // points outside the bounding box
};

// Throws kInvalidArgument when n_grid is 0 (or n_grid^2 overflows 32 bits)
// and kOutOfRange when no point falls inside the box.
Rasterization Rasterize(std::span<const GeoPoint> points,
                        const BoundingBox& bbox, std::size_t n_grid);
Rasterization Rasterize(const MobilityProfile& profile, const BoundingBox& bbox,
                        std::size_t n_grid);

// Normalized density matrix; sparse like DensityMatrix.
class Distribution {
 public:
  Distribution(BoundingBox bbox, std::size_t n_grid,
               std::vector<std::pair<std::uint32_t, double>> cells);

  // Builds from a row-major dense grid of n_grid * n_grid probabilities.
  // Entries must be non-negative and sum to 1 within 1e-9.
  static Distribution FromDense(std::span<const double> probs,
                                std::size_t n_grid,
                                const BoundingBox& bbox = {0, 1, 0, 1});

  const BoundingBox& bbox() const { return bbox_; }
  std::size_t n_grid() const { return n_grid_; }
  const std::vector<std::pair<std::uint32_t, double>>& cells() const {
    return cells_;
  }

  double At(std::size_t row, std::size_t col) const;
  std::vector<double> Dense() const;

 private:
  BoundingBox bbox_;
  std::size_t n_grid_;
  std::vector<std::pair<std::uint32_t, double>> cells_;
};

// probs = counts / total. Throws kInvalidArgument on a zero total.
Distribution Normalize(const DensityMatrix& m);

// KL(p || q) in nats after adding epsilon to every cell of both grids and
// renormalizing. Cells empty in both contribute exactly zero, so only the
// union of supports is visited. Throws kInvalidArgument on grid mismatch or
// epsilon <= 0.
double KlDivergence(const Distribution& p, const Distribution& q,
                    double epsilon = kDefaultKlEpsilon);

// Mass share of cells where both distributions are non-zero:
//   sum_{p>0 and q>0} (p + q) / sum (p + q).
double JaccardOverlap(const Distribution& p, const Distribution& q);

// 1 - JaccardOverlap: 0 for identical supports, 1 for disjoint ones.
double JaccardDistance(const Distribution& p, const Distribution& q);

}  // namespace poialias

#endif  // POIALIAS_DISTRIBUTION_H_
