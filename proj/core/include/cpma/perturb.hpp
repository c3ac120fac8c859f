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
#include <vector>

#include "cpma/grid.hpp"

namespace cpma {

enum class NoiseKind { Contour2D, Eden3D };

/// Boundary noise model. Level k applies the single-level model k times
/// using one random stream seeded by `seed`, so level k + 1 extends
/// level k.
///
/// Contour2D: each traced contour sample is selected with probability
/// `p_deform`; a selected sample and its +/- `neighborhood` contour
/// neighbours receive a protrusion (union of a disc centred one step along
/// the outward normal) or an indentation (disc removed one step along the
/// inward normal), chosen with equal odds. Disc radius is ceil(|2 z|) with
/// z standard normal.
///
/// Eden3D: `events_per_level` accretion events per level (0 selects 1% of
/// the boundary voxel count, rounded up); each sets one uniformly chosen
/// background voxel that is 26-adjacent to the shape.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::Contour2D;
  int level = 0;
  std::uint64_t seed = 0;
  double p_deform = 0.005;
  int neighborhood = 2;
  int events_per_level = 0;

  static NoiseSpec for_rank(int rank, int level, std::uint64_t seed) {
    NoiseSpec s;
    s.kind = rank == 3 ? NoiseKind::Eden3D : NoiseKind::Contour2D;
    s.level = level;
    s.seed = seed;
    return s;
  }
  void validate() const;
};

/// Perturbed copy of a shape. The result is a single connected component
/// with a clear frame and the same extents as the input.
BinaryGrid apply_noise(const BinaryGrid& grid, const NoiseSpec& spec);

/// Outer boundary of the component containing the first foreground cell,
/// as an ordered, closed sequence of cells (Moore neighbour tracing).
std::vector<GridPoint> trace_contour(const BinaryGrid& grid);

/// Counter-clockwise rotation in degrees (2D), or azimuth about z followed
/// by elevation about y (3D): R = R_az(azimuth) * R_el(elevation).
struct RotationSpec {
  double angle2d = 0.0;
  double azimuth = 0.0;
  double elevation = 0.0;

  static RotationSpec planar(double deg) { return {deg, 0.0, 0.0}; }
  static RotationSpec spatial(double az, double el) { return {0.0, az, el}; }
  bool is_identity() const { return angle2d == 0.0 && azimuth == 0.0 && elevation == 0.0; }
};

/// 3x3 row-major rotation matrix; entries are exact for multiples of 90°.
std::array<double, 9> rotation_matrix(const RotationSpec& spec, int rank);

/// Canvas large enough to hold the rotated grid without clipping. Equal to
/// the (possibly axis-swapped) input for multiples of 90°.
Extents rotated_extents(const Extents& source, const RotationSpec& spec);

/// Nearest-neighbour rotation about the grid centre onto rotated_extents().
BinaryGrid rotate_grid(const BinaryGrid& grid, const RotationSpec& spec);

/// Applies the same rotation as rotate_grid to every point (rounded to the
/// nearest lattice point of the rotated canvas). Radii are unchanged.
MedialAxisTransform rotate_points(const MedialAxisTransform& mat, const RotationSpec& spec,
                                  const Extents& source);

/// Centre-aligned crop or pad to `target`.
BinaryGrid center_crop(const BinaryGrid& grid, const Extents& target);

/// Nearest-neighbour rescale by `factor` (> 0); keeps a background border.
BinaryGrid scale_grid(const BinaryGrid& grid, double factor);

/// Foreground cells with at least one background 4- (2D) or 6- (3D)
/// neighbour.
std::size_t boundary_size(const BinaryGrid& grid);

}  // namespace cpma
