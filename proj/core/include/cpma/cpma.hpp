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

#include "cpma/distfield.hpp"
#include "cpma/grid.hpp"

namespace cpma {

/// Parameters of the cosine-pruned medial axis.
struct CpmaConfig {
  /// Score threshold; a foreground point survives when its score is > tau.
  double tau = 0.47;
  /// Number of low-pass reconstructions M_used; 0 selects ceil(M / 2)
  /// where M is the largest grid extent.
  int max_freq = 0;
  double bin_threshold = 0.5;
  int max_connect_iters = 200;
  /// Worker threads for the per-frequency terms; 0 = hardware concurrency.
  int threads = 0;

  int resolved_max_freq(const Extents& extents) const;
  void validate(const Extents& extents) const;
};

/// Fraction of low-pass reconstructions whose medial axis contains each
/// cell: F(x) = (1 / M_used) * sum_{i=1}^{M_used - 1} [MAT(I_i)](x), where
/// I_i keeps the first i frequencies per axis. Reconstructions are
/// confined to the interior of the frame before skeletonizing.
ScoreField score_function(const BinaryGrid& grid, const CpmaConfig& cfg);

/// Foreground points with score strictly above tau, radii from `field`.
MedialAxisTransform threshold_score(const BinaryGrid& grid, const DistanceField& field,
                                    const ScoreField& score, double tau);

struct CpmaResult {
  MedialAxisTransform axis;
  ScoreField score;
};

CpmaResult extract_cpma(const BinaryGrid& grid, const CpmaConfig& cfg);

/// Foreground lattice with 8- (2D) or 26-connectivity. Edge energy is
/// 1 - (F(a) + F(b)) / 2.
struct LatticeGraph {
  struct Edge {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double weight = 0.0;
  };

  Extents extents;
  std::vector<GridPoint> nodes;        // linearized order
  std::vector<std::int64_t> node_of;   // per cell; -1 on background
  std::vector<Edge> edges;             // a < b
  std::vector<std::size_t> adj_offset; // CSR over incident edges
  std::vector<std::uint32_t> adj_edge;

  std::size_t node_count() const { return nodes.size(); }
  std::uint32_t other(std::uint32_t edge, std::uint32_t node) const {
    return edges[edge].a == node ? edges[edge].b : edges[edge].a;
  }
};

LatticeGraph build_lattice(const BinaryGrid& grid, const ScoreField& field);

struct ConnectResult {
  MedialAxisTransform axis;
  bool connected = false;
  /// Iteration cap hit while pieces remained connectable.
  bool cap_reached = false;
  /// Pieces lie in different foreground components and cannot be joined.
  bool foreground_disconnected = false;
  int iterations = 0;
};

/// Joins the pieces of a pruned axis with minimum-energy lattice paths.
/// Each round links the two largest pieces (ties: smaller first index) of
/// the first foreground component that still holds several pieces.
ConnectResult connect_cpma(const MedialAxisTransform& axis, const ScoreField& field,
                           const BinaryGrid& grid, const CpmaConfig& cfg);

/// Minimum-energy path from any node of `sources` to the first settled
/// node of `targets` (both node-index masks). Returns node indices from
/// source to target; empty if unreachable.
std::vector<std::uint32_t> min_energy_path(const LatticeGraph& graph,
                                           const std::vector<std::uint8_t>& sources,
                                           const std::vector<std::uint8_t>& targets);

}  // namespace cpma
