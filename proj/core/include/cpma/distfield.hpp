// Copyright 2026 The CPMA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "cpma/grid.hpp"

namespace cpma {

/// Exact Euclidean distance transform with a feature transform.
///
/// `sq[i]` is the squared distance from cell i to the nearest background
/// cell (0 on background). `feature[i]` is the linearized index of one
/// nearest background cell: the one with the smallest index when several
/// are equidistant.
struct DistanceField {
  Extents extents;
  std::vector<std::int64_t> sq;
  std::vector<std::size_t> feature;

  double dist(std::size_t i) const;
  double dist(const GridPoint& p) const { return dist(extents.index(p)); }
  std::int64_t sq_at(const GridPoint& p) const { return sq[extents.index(p)]; }
  GridPoint feature_point(std::size_t i) const { return extents.point(feature[i]); }
  GridPoint feature_point(const GridPoint& p) const { return feature_point(extents.index(p)); }
  std::int64_t max_sq() const;
};

/// Squared distances only. Background cells are the zero set; throws
/// DomainError if the grid has no background.
std::vector<std::int64_t> squared_edt(const BinaryGrid& grid);

DistanceField edt(const BinaryGrid& grid);

/// Every background cell at exactly the nearest distance from `p`, in
/// linearized order. Empty for background cells.
std::vector<GridPoint> projection_set(const BinaryGrid& grid, const DistanceField& field,
                                      const GridPoint& p);

/// Integer offset vectors grouped by squared norm, each group in
/// lexicographic (z, y, x) order.
class ShellTable {
 public:
  ShellTable(int rank, std::int64_t max_norm);

  int rank() const { return rank_; }
  std::int64_t max_norm() const { return max_norm_; }
  std::span<const GridPoint> shell(std::int64_t norm) const;

  /// Shared table covering at least `max_norm`; grows on demand.
  static std::shared_ptr<const ShellTable> get(int rank, std::int64_t max_norm);

 private:
  int rank_;
  std::int64_t max_norm_;
  std::vector<std::size_t> start_;
  std::vector<GridPoint> vectors_;
};

}  // namespace cpma
