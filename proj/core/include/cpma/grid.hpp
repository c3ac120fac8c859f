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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "cpma/error.hpp"

namespace cpma {

/// Integer lattice coordinates. 2D points keep z == 0.
struct GridPoint {
  std::array<int, 3> c{0, 0, 0};

  constexpr GridPoint() = default;
  constexpr GridPoint(int x, int y, int z = 0) : c{x, y, z} {}

  constexpr int x() const { return c[0]; }
  constexpr int y() const { return c[1]; }
  constexpr int z() const { return c[2]; }
  constexpr int operator[](int axis) const { return c[axis]; }

  friend constexpr auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// Squared Euclidean distance between two lattice points.
constexpr std::int64_t squared_distance(const GridPoint& a, const GridPoint& b) {
  std::int64_t s = 0;
  for (int k = 0; k < 3; ++k) {
    const std::int64_t d = static_cast<std::int64_t>(a.c[k]) - b.c[k];
    s += d * d;
  }
  return s;
}

double distance(const GridPoint& a, const GridPoint& b);

/// Per-axis extent of a 2D or 3D grid. Linearization is row-major with x
/// fastest: index = x + nx * (y + ny * z).
class Extents {
 public:
  Extents() = default;
  Extents(int nx, int ny);
  Extents(int nx, int ny, int nz);

  int rank() const { return rank_; }
  int operator[](int axis) const { return n_[axis]; }
  int nx() const { return n_[0]; }
  int ny() const { return n_[1]; }
  int nz() const { return n_[2]; }
  std::size_t size() const {
    return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
  }
  int max_extent() const;

  std::size_t index(const GridPoint& p) const {
    return static_cast<std::size_t>(p.c[0]) +
           static_cast<std::size_t>(n_[0]) *
               (static_cast<std::size_t>(p.c[1]) +
                static_cast<std::size_t>(n_[1]) * static_cast<std::size_t>(p.c[2]));
  }
  GridPoint point(std::size_t index) const;
  bool contains(const GridPoint& p) const;
  bool on_frame(const GridPoint& p) const;

  friend bool operator==(const Extents&, const Extents&) = default;

 private:
  std::array<int, 3> n_{0, 0, 1};
  int rank_ = 0;
};

/// Offsets of the 8 (2D) or 26 (3D) lattice neighbours, ordered so that
/// the linearized offset is ascending.
std::span<const GridPoint> neighbor_offsets(int rank);

/// Boolean occupancy grid. A true cell belongs to the shape.
class BinaryGrid {
 public:
  BinaryGrid() = default;
  explicit BinaryGrid(Extents extents, bool fill = false);
  BinaryGrid(Extents extents, std::vector<std::uint8_t> cells);

  const Extents& extents() const { return extents_; }
  int rank() const { return extents_.rank(); }
  std::size_t size() const { return cells_.size(); }

  bool operator[](std::size_t index) const { return cells_[index] != 0; }
  bool at(const GridPoint& p) const { return cells_[extents_.index(p)] != 0; }
  /// False outside the grid.
  bool test(const GridPoint& p) const {
    return extents_.contains(p) && cells_[extents_.index(p)] != 0;
  }
  void set(std::size_t index, bool value) { cells_[index] = value ? 1 : 0; }
  void set(const GridPoint& p, bool value) { set(extents_.index(p), value); }

  std::span<const std::uint8_t> cells() const { return cells_; }
  std::size_t count() const;
  bool frame_is_clear() const;

  friend bool operator==(const BinaryGrid&, const BinaryGrid&) = default;

 private:
  Extents extents_;
  std::vector<std::uint8_t> cells_;
};

/// Dense real-valued field over a grid domain.
template <typename T>
struct Field {
  Extents extents;
  std::vector<T> values;

  Field() = default;
  explicit Field(Extents e, T fill = T{}) : extents(e), values(e.size(), fill) {}

  T operator[](std::size_t i) const { return values[i]; }
  T& operator[](std::size_t i) { return values[i]; }
  T at(const GridPoint& p) const { return values[extents.index(p)]; }
};

/// Per-cell score in [0, 1].
using ScoreField = Field<double>;

struct MatElement {
  GridPoint point;
  double radius = 0.0;

  friend bool operator==(const MatElement&, const MatElement&) = default;
};

/// A set of (point, radius) pairs over a grid domain, kept sorted by the
/// linearized index of the point with no duplicates.
class MedialAxisTransform {
 public:
  MedialAxisTransform() = default;
  explicit MedialAxisTransform(Extents extents) : extents_(extents) {}
  MedialAxisTransform(Extents extents, std::vector<MatElement> elements);

  const Extents& extents() const { return extents_; }
  std::span<const MatElement> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  std::vector<GridPoint> points() const;
  bool contains(const GridPoint& p) const;
  BinaryGrid indicator() const;

  friend bool operator==(const MedialAxisTransform&,
                         const MedialAxisTransform&) = default;

 private:
  void normalize();

  Extents extents_;
  std::vector<MatElement> elements_;
};

/// Foreground points in linearized order.
std::vector<GridPoint> foreground_points(const BinaryGrid& grid);

/// Adds a one-cell background ring around the grid if (and only if) any
/// foreground cell lies on the frame.
BinaryGrid ensure_background_border(const BinaryGrid& grid);

/// Connected components under 8- (2D) or 26-connectivity. Label 0 is
/// background; components are numbered 1..n in order of their smallest
/// linearized index.
struct Components {
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t> sizes;  // sizes[k] for label k + 1
  std::size_t count() const { return sizes.size(); }
};
Components label_components(const BinaryGrid& grid);

/// Keeps the largest component (ties: the one with smallest index).
BinaryGrid keep_largest_component(const BinaryGrid& grid);

/// Exact lattice symmetry: output axis k takes input axis perm[k], then
/// optionally mirrors it. Together these span the 8 (2D) / 48 (3D)
/// symmetries of a square / cubic grid.
struct LatticeSymmetry {
  std::array<int, 3> perm{0, 1, 2};
  std::array<bool, 3> flip{false, false, false};

  Extents apply(const Extents& e) const;
  GridPoint apply(const GridPoint& p, const Extents& source) const;
  BinaryGrid apply(const BinaryGrid& g) const;
  ScoreField apply(const ScoreField& f) const;
  MedialAxisTransform apply(const MedialAxisTransform& m) const;

  static std::vector<LatticeSymmetry> all(int rank);
};

enum class GridFormat { Pbm2D, Vox3D };

/// Picks the format from a .pbm / .vox extension.
GridFormat format_from_path(const std::filesystem::path& path);

BinaryGrid parse_grid(std::span<const std::uint8_t> bytes, GridFormat format);
std::vector<std::uint8_t> encode_grid(const BinaryGrid& grid, GridFormat format);

/// Loads a grid and enforces the background border. Throws DomainError on
/// an empty shape.
BinaryGrid load_grid(const std::filesystem::path& path, GridFormat format);
BinaryGrid load_grid(const std::filesystem::path& path);
void save_grid(const BinaryGrid& grid, const std::filesystem::path& path,
               GridFormat format);
void save_grid(const BinaryGrid& grid, const std::filesystem::path& path);

}  // namespace cpma
