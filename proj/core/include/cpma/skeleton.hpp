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

#include <string>
#include <string_view>

#include "cpma/distfield.hpp"
#include "cpma/grid.hpp"

namespace cpma {

enum class PruningMethod { MAT, Thinning, GIMA, BEMA, SAT, SFEMA, PoissonSkel, TEASAR };

std::string_view to_string(PruningMethod m);

/// Chebyshev radius searched for digital-ball containment witnesses.
inline constexpr int kContainmentWindow = 3;

/// Method plus its single parameter: gamma (GIMA, pixels), theta (BEMA,
/// degrees) or scale (SAT and SFEMA).
struct PrunerSpec {
  PruningMethod method = PruningMethod::MAT;
  double gamma = 0.0;
  double theta = 0.0;
  double scale = 1.0;

  static PrunerSpec mat() { return {}; }
  static PrunerSpec thinning() { return {PruningMethod::Thinning}; }
  static PrunerSpec gima(double g) { return {PruningMethod::GIMA, g}; }
  static PrunerSpec bema(double t) { return {PruningMethod::BEMA, 0.0, t}; }
  static PrunerSpec sat(double s) { return {PruningMethod::SAT, 0.0, 0.0, s}; }
  static PrunerSpec sfema(double s) { return {PruningMethod::SFEMA, 0.0, 0.0, s}; }

  /// Throws ParameterError on out-of-range parameters.
  void validate() const;
  bool implemented() const;
  /// "gamma=5", "theta=120", "s=1.1" or "" for parameterless methods.
  std::string params() const;
};

/// Discrete medial axis transform. A foreground point x is dropped when its
/// ball is swallowed by the ball of another foreground point y, and kept
/// otherwise. Radii are the exact EDT values. Two witnesses are checked:
///
///  - Euclidean: |x - y| + D(x) <= D(y) for any y. D is 1-Lipschitz, so this
///    only holds with equality, with y on the ray from the nearest background
///    point through x; the first lattice point on that ray decides it.
///  - Digital: the lattice points strictly inside B(x, D(x)) all lie strictly
///    inside B(y, D(y)), for y within kContainmentWindow (Chebyshev) of x.
///
/// Both witnesses imply ball containment, so every dropped ball is covered
/// and the reconstruction stays exact.
MedialAxisTransform extract_mat(const BinaryGrid& grid);
MedialAxisTransform extract_mat(const BinaryGrid& grid, const DistanceField& field);

/// Union of digital balls {y : |y - x| < r} (each ball also covers its own
/// centre). Open balls of radius D(x) never reach a background cell, so
/// reconstruct(extract_mat(g)) == g.
BinaryGrid reconstruct(const MedialAxisTransform& mat, const Extents& extents);

/// Baseline pruners. GIMA, BEMA and SFEMA filter extract_mat(grid); SAT
/// skeletonizes the union of s-scaled balls and clips to the shape;
/// Thinning is a homotopic erosion and not a subset of the MAT.
MedialAxisTransform prune(const BinaryGrid& grid, const PrunerSpec& spec);

/// Zhang-Suen thinning in 2D; directional 26/6 simple-point peeling in 3D.
BinaryGrid thin(const BinaryGrid& grid);

/// 3D simple-point test under (26, 6) adjacency on a 3x3x3 neighbourhood
/// given in linearized order with the centre at index 13.
bool is_simple_point_3d(const std::array<bool, 27>& cube);

}  // namespace cpma
