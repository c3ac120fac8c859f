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

#include <span>
#include <vector>

#include "cpma/grid.hpp"

namespace cpma {

using PointSet = std::vector<GridPoint>;

/// For every x in `from`, the Euclidean distance to the closest point of
/// `to`. Computed with an exact EDT over the bounding box of both sets.
std::vector<double> nearest_distances(std::span<const GridPoint> from,
                                      std::span<const GridPoint> to);

/// max(sup_x inf_y |x - y|, sup_y inf_x |x - y|). Throws DomainError on an
/// empty set.
double hausdorff(std::span<const GridPoint> x, std::span<const GridPoint> y);

/// Mean nearest distance D(X|Y) = (1/|X|) sum_x min_y |x - y|.
double mean_nearest_distance(std::span<const GridPoint> x, std::span<const GridPoint> y);

/// Dubuisson-Jain dissimilarity max(D(X|Y), D(Y|X)).
double dubuisson_jain(std::span<const GridPoint> x, std::span<const GridPoint> y);

/// |A and B| / |A or B|; 1 when both are empty.
double jaccard(const BinaryGrid& a, const BinaryGrid& b);

}  // namespace cpma
