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

#include <array>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "cpma/skeleton.hpp"

namespace cpma {

namespace {

BinaryGrid zhang_suen(const BinaryGrid& input) {
  BinaryGrid g = input;
  const Extents& e = g.extents();
  auto px = [&](int x, int y) -> int { return g.test(GridPoint(x, y)) ? 1 : 0; };
  std::vector<std::size_t> doomed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int step = 0; step < 2; ++step) {
      doomed.clear();
      for (int y = 0; y < e.ny(); ++y)
        for (int x = 0; x < e.nx(); ++x) {
          if (!px(x, y)) continue;
          // P2..P9 clockwise from north
          const std::array<int, 8> p{px(x, y - 1),     px(x + 1, y - 1), px(x + 1, y),
                                     px(x + 1, y + 1), px(x, y + 1),     px(x - 1, y + 1),
                                     px(x - 1, y),     px(x - 1, y - 1)};
          int b = 0, a = 0;
          for (int k = 0; k < 8; ++k) {
            b += p[k];
            if (p[k] == 0 && p[(k + 1) % 8] == 1) ++a;
          }
          if (b < 2 || b > 6 || a != 1) continue;
          const int n = p[0], ea = p[2], s = p[4], w = p[6];
          if (step == 0 ? (n * ea * s == 0 && ea * s * w == 0)
                        : (n * ea * w == 0 && n * s * w == 0))
            doomed.push_back(e.index(GridPoint(x, y)));
        }
      // Plain Zhang-Suen erases a 2x2 block in one pass. A doomed pixel whose
      // whole neighbourhood is going too is spared, so no component vanishes.
      std::vector<std::uint8_t> mark(g.size(), 0);
      for (std::size_t i : doomed) mark[i] = 1;
      for (std::size_t i : doomed) {
        const GridPoint p = e.point(i);
        bool survivor = false;
        for (int dy = -1; dy <= 1 && !survivor; ++dy)
          for (int dx = -1; dx <= 1 && !survivor; ++dx) {
            const GridPoint q(p.x() + dx, p.y() + dy);
            if ((dx || dy) && g.test(q) && !mark[e.index(q)]) survivor = true;
          }
        if (survivor) {
          g.set(i, false);
          changed = true;
        } else {
          mark[i] = 0;
        }
      }
    }
  }
  return g;
}

std::array<bool, 27> cube_around(const BinaryGrid& g, const GridPoint& p) {
  std::array<bool, 27> c{};
  int k = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        c[k++] = g.test(GridPoint(p.x() + dx, p.y() + dy, p.z() + dz));
  return c;
}

int cube_index(int x, int y, int z) { return (x + 1) + 3 * ((y + 1) + 3 * (z + 1)); }

// Directional peeling: each sub-iteration removes border points facing one
// of the six axis directions, checked sequentially so every single removal
// preserves topology.
BinaryGrid directional_thinning_3d(const BinaryGrid& input) {
  BinaryGrid g = input;
  const Extents& e = g.extents();
  static constexpr std::array<std::array<int, 3>, 6> kDirections{
      {{0, 0, 1}, {0, 0, -1}, {0, 1, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}}};
  std::vector<std::size_t> candidates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& d : kDirections) {
      candidates.clear();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g[i]) continue;
        const GridPoint p = e.point(i);
        if (!g.test(GridPoint(p.x() + d[0], p.y() + d[1], p.z() + d[2]))) candidates.push_back(i);
      }
      for (std::size_t i : candidates) {
        const GridPoint p = e.point(i);
        const auto cube = cube_around(g, p);
        int neighbours = 0;
        for (int k = 0; k < 27; ++k) neighbours += (k != 13 && cube[k]) ? 1 : 0;
        if (neighbours <= 1) continue;  // curve end
        if (!is_simple_point_3d(cube)) continue;
        g.set(i, false);
        changed = true;
      }
    }
  }
  return g;
}

}  // namespace

bool is_simple_point_3d(const std::array<bool, 27>& cube) {
  // Foreground: one 26-connected component in N26*.
  std::array<int, 27> label{};
  int fg_components = 0;
  for (int s = 0; s < 27; ++s) {
    if (s == 13 || !cube[s] || label[s]) continue;
    ++fg_components;
    std::vector<int> stack{s};
    label[s] = fg_components;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int cx = c % 3, cy = (c / 3) % 3, cz = c / 9;
      for (int t = 0; t < 27; ++t) {
        if (t == 13 || !cube[t] || label[t]) continue;
        const int tx = t % 3, ty = (t / 3) % 3, tz = t / 9;
        if (std::abs(tx - cx) <= 1 && std::abs(ty - cy) <= 1 && std::abs(tz - cz) <= 1) {
          label[t] = fg_components;
          stack.push_back(t);
        }
      }
    }
  }
  if (fg_components != 1) return false;

  // Background: one 6-connected component in N18* that is 6-adjacent to
  // the centre.
  auto in_n18 = [](int t) {
    const int ax = std::abs(t % 3 - 1), ay = std::abs((t / 3) % 3 - 1), az = std::abs(t / 9 - 1);
    return t != 13 && ax + ay + az <= 2;
  };
  std::array<int, 27> bl{};
  int bg_touching = 0, next = 0;
  for (const int s : {cube_index(0, 0, -1), cube_index(0, 0, 1), cube_index(0, -1, 0),
                      cube_index(0, 1, 0), cube_index(-1, 0, 0), cube_index(1, 0, 0)}) {
    if (cube[s] || bl[s]) continue;
    ++next;
    ++bg_touching;
    std::vector<int> stack{s};
    bl[s] = next;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int cx = c % 3, cy = (c / 3) % 3, cz = c / 9;
      for (int t = 0; t < 27; ++t) {
        if (!in_n18(t) || cube[t] || bl[t]) continue;
        const int tx = t % 3, ty = (t / 3) % 3, tz = t / 9;
        if (std::abs(tx - cx) + std::abs(ty - cy) + std::abs(tz - cz) == 1) {
          bl[t] = next;
          stack.push_back(t);
        }
      }
    }
  }
  return bg_touching == 1;
}

BinaryGrid thin(const BinaryGrid& grid) {
  return grid.rank() == 2 ? zhang_suen(grid) : directional_thinning_3d(grid);
}

}  // namespace cpma
