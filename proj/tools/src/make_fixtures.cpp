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

// Writes the synthetic shape suite used by the tests and benchmarks.
//   cpma_fixtures <output-dir>

#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <vector>

#include "cpma/grid.hpp"
#include "cpma/meshio.hpp"

namespace fs = std::filesystem;
using cpma::BinaryGrid;
using cpma::Extents;
using cpma::GridPoint;

namespace {

using Vec2 = std::array<double, 2>;

BinaryGrid raster2d(int n, const std::function<bool(double, double)>& inside) {
  BinaryGrid g(Extents(n, n));
  for (int y = 1; y < n - 1; ++y)
    for (int x = 1; x < n - 1; ++x)
      if (inside(x, y)) g.set(GridPoint(x, y), true);
  return g;
}

BinaryGrid raster3d(int n, const std::function<bool(double, double, double)>& inside) {
  BinaryGrid g(Extents(n, n, n));
  for (int z = 1; z < n - 1; ++z)
    for (int y = 1; y < n - 1; ++y)
      for (int x = 1; x < n - 1; ++x)
        if (inside(x, y, z)) g.set(GridPoint(x, y, z), true);
  return g;
}

// Even-odd rule at the cell centre.
bool in_polygon(const std::vector<Vec2>& poly, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a[1] > y) != (b[1] > y) && x < (b[0] - a[0]) * (y - a[1]) / (b[1] - a[1]) + a[0])
      in = !in;
  }
  return in;
}

std::vector<Vec2> star_polygon(double cx, double cy, double outer, double inner, int tips) {
  std::vector<Vec2> p;
  for (int k = 0; k < 2 * tips; ++k) {
    const double r = k % 2 == 0 ? outer : inner;
    const double a = -std::numbers::pi / 2 + k * std::numbers::pi / tips;
    p.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return p;
}

cpma::TriangleMesh cube_mesh() {
  cpma::TriangleMesh m;
  for (int k = 0; k < 8; ++k)
    m.vertices.push_back({double(k & 1), double((k >> 1) & 1), double((k >> 2) & 1)});
  // Outward-facing triangles, two per face.
  m.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

cpma::TriangleMesh icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  cpma::TriangleMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  auto normalize = [](std::array<double, 3> v) {
    const double l = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return std::array<double, 3>{v[0] / l, v[1] / l, v[2] / l};
  };
  for (auto& v : m.vertices) v = normalize(v);
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      const auto& p = m.vertices[a];
      const auto& q = m.vertices[b];
      m.vertices.push_back(normalize({p[0] + q[0], p[1] + q[1], p[2] + q[2]}));
      const auto id = static_cast<std::uint32_t>(m.vertices.size() - 1);
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<std::uint32_t, 3>> faces;
    for (const auto& f : m.faces) {
      const auto a = midpoint(f[0], f[1]);
      const auto b = midpoint(f[1], f[2]);
      const auto c = midpoint(f[2], f[0]);
      faces.push_back({f[0], a, c});
      faces.push_back({f[1], b, a});
      faces.push_back({f[2], c, b});
      faces.push_back({a, b, c});
    }
    m.faces = std::move(faces);
  }
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: cpma_fixtures <output-dir>\n";
    return 2;
  }
  const fs::path root = argv[1];
  for (const char* sub : {"shapes2d", "shapes3d", "special", "mesh"})
    fs::create_directories(root / sub);

  constexpr int n2 = 128;
  const double c = 63.5;
  auto save2 = [&](const char* name, const BinaryGrid& g) {
    cpma::save_grid(g, root / "shapes2d" / (std::string(name) + ".pbm"));
  };

  save2("disc", raster2d(n2, [&](double x, double y) {
          return (x - c) * (x - c) + (y - c) * (y - c) <= 40.0 * 40.0;
        }));
  save2("rectangle", raster2d(n2, [](double x, double y) {
          return x >= 24 && x <= 103 && y >= 40 && y <= 87;
        }));
  save2("lshape", raster2d(n2, [](double x, double y) {
          return (x >= 24 && x <= 56 && y >= 20 && y <= 107) ||
                 (x >= 24 && x <= 104 && y >= 76 && y <= 107);
        }));
  const auto star = star_polygon(c, c + 4, 54.0, 24.0, 5);
  save2("star", raster2d(n2, [&](double x, double y) { return in_polygon(star, x, y); }));
  save2("blob", raster2d(n2, [&](double x, double y) {
          const double a = std::atan2(y - c, x - c);
          const double r = 36.0 + 9.0 * std::sin(3.0 * a) + 5.0 * std::cos(5.0 * a + 0.7);
          return std::hypot(x - c, y - c) <= r;
        }));
  const std::vector<Vec2> horse = {
      {16, 44},  {26, 34},  {36, 40},  {40, 50},  {86, 48},  {98, 34},  {102, 18},
      {108, 16}, {118, 26}, {114, 34}, {106, 38}, {102, 54}, {100, 66}, {98, 108},
      {90, 108}, {88, 76},  {82, 74},  {82, 108}, {74, 108}, {72, 74},  {48, 74},
      {46, 108}, {38, 108}, {38, 76},  {32, 74},  {30, 108}, {22, 108}, {24, 66},
      {26, 54},  {20, 50}};
  save2("horse", raster2d(n2, [&](double x, double y) { return in_polygon(horse, x, y); }));
  save2("ellipse", raster2d(n2, [&](double x, double y) {
          const double a = std::numbers::pi / 6;
          const double u = (x - c) * std::cos(a) + (y - c) * std::sin(a);
          const double v = -(x - c) * std::sin(a) + (y - c) * std::cos(a);
          return (u * u) / (52.0 * 52.0) + (v * v) / (26.0 * 26.0) <= 1.0;
        }));
  save2("cross", raster2d(n2, [&](double x, double y) {
          return (std::abs(x - c) <= 12 && std::abs(y - c) <= 50) ||
                 (std::abs(y - c) <= 12 && std::abs(x - c) <= 50);
        }));
  save2("dumbbell", raster2d(n2, [&](double x, double y) {
          return std::hypot(x - 34, y - c) <= 24 || std::hypot(x - 94, y - c) <= 24 ||
                 (x >= 34 && x <= 94 && std::abs(y - c) <= 8);
        }));
  save2("ring", raster2d(n2, [&](double x, double y) {
          const double r = std::hypot(x - c, y - c);
          return r <= 50.0 && r >= 26.0;
        }));

  // Rectangle with a 3-pixel bump on its upper edge.
  cpma::save_grid(raster2d(n2, [](double x, double y) {
                    return (x >= 20 && x <= 107 && y >= 44 && y <= 83) ||
                           (x >= 62 && x <= 64 && y >= 41 && y <= 43);
                  }),
                  root / "special" / "bump_rectangle.pbm");

  constexpr int n3 = 32;
  const double c3 = 15.5;
  auto save3 = [&](const char* name, const BinaryGrid& g) {
    cpma::save_grid(g, root / "shapes3d" / (std::string(name) + ".vox"));
  };
  save3("box", raster3d(n3, [](double x, double y, double z) {
          return x >= 5 && x <= 26 && y >= 8 && y <= 23 && z >= 10 && z <= 21;
        }));
  save3("cylinder", raster3d(n3, [&](double x, double y, double z) {
          return (x - c3) * (x - c3) + (y - c3) * (y - c3) <= 9.0 * 9.0 && z >= 4 && z <= 27;
        }));
  save3("blob", raster3d(n3, [&](double x, double y, double z) {
          auto ball = [&](double bx, double by, double bz, double r) {
            return (x - bx) * (x - bx) + (y - by) * (y - by) + (z - bz) * (z - bz) <= r * r;
          };
          return ball(12, 14, 15, 8.0) || ball(20, 17, 16, 7.0) || ball(15, 20, 11, 5.5);
        }));
  save3("cube_mesh", cpma::voxelize(cube_mesh(), 24));

  cpma::write_ply(cube_mesh(), root / "mesh" / "cube.ply");
  cpma::write_ply(icosphere(3), root / "mesh" / "icosphere.ply");
  std::cout << "fixtures written to " << root.string() << '\n';
  return 0;
}
