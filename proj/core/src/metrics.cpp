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

#include "cpma/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpma/distfield.hpp"

namespace cpma {

std::vector<double> nearest_distances(std::span<const GridPoint> from,
                                      std::span<const GridPoint> to) {
  if (from.empty() || to.empty()) throw DomainError("distance between point sets needs nonempty sets");
  std::array<int, 3> lo{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(),
                        std::numeric_limits<int>::max()};
  std::array<int, 3> hi{std::numeric_limits<int>::min(), std::numeric_limits<int>::min(),
                        std::numeric_limits<int>::min()};
  for (const auto set : {from, to})
    for (const auto& p : set)
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], p.c[k]);
        hi[k] = std::max(hi[k], p.c[k]);
      }
  const Extents box(hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1);
  auto local = [&](const GridPoint& p) {
    return GridPoint(p.x() - lo[0], p.y() - lo[1], p.z() - lo[2]);
  };
  // Points of `to` are the background; everything else is foreground.
  BinaryGrid g(box, true);
  for (const auto& p : to) g.set(local(p), false);
  const std::vector<std::int64_t> sq = squared_edt(g);
  std::vector<double> out;
  out.reserve(from.size());
  for (const auto& p : from) out.push_back(std::sqrt(static_cast<double>(sq[box.index(local(p))])));
  return out;
}

double hausdorff(std::span<const GridPoint> x, std::span<const GridPoint> y) {
  const auto a = nearest_distances(x, y);
  const auto b = nearest_distances(y, x);
  return std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
}

double mean_nearest_distance(std::span<const GridPoint> x, std::span<const GridPoint> y) {
  const auto d = nearest_distances(x, y);
  double sum = 0.0;
  for (const double v : d) sum += v;
  return sum / static_cast<double>(d.size());
}

double dubuisson_jain(std::span<const GridPoint> x, std::span<const GridPoint> y) {
  return std::max(mean_nearest_distance(x, y), mean_nearest_distance(y, x));
}

double jaccard(const BinaryGrid& a, const BinaryGrid& b) {
  if (!(a.extents() == b.extents())) throw ParameterError("jaccard: grid dims differ");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace cpma
