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

#include "cpma/perturb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cpma/random.hpp"

namespace cpma {

void NoiseSpec::validate() const {
  if (level < 0) throw ParameterError("noise level must be >= 0");
  if (!(p_deform > 0.0 && p_deform < 1.0)) throw ParameterError("p_deform must lie in (0, 1)");
  if (neighborhood < 0) throw ParameterError("neighborhood must be >= 0");
  if (events_per_level < 0) throw ParameterError("events_per_level must be >= 1 (or 0 for auto)");
}

std::size_t boundary_size(const BinaryGrid& grid) {
  const Extents& e = grid.extents();
  std::size_t n = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i]) continue;
    const GridPoint p = e.point(i);
    bool edge = false;
    for (int axis = 0; axis < e.rank() && !edge; ++axis)
      for (int s = -1; s <= 1 && !edge; s += 2) {
        GridPoint q = p;
        q.c[axis] += s;
        edge = !grid.test(q);
      }
    n += edge ? 1 : 0;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Contour tracing

std::vector<GridPoint> trace_contour(const BinaryGrid& grid) {
  if (grid.rank() != 2) throw ParameterError("contour tracing needs a 2D grid");
  const Extents& e = grid.extents();
  std::size_t first = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i]) {
      first = i;
      break;
    }
  if (first == grid.size()) return {};

  // Clockwise on screen (y down), starting west.
  static constexpr std::array<std::array<int, 2>, 8> kDir{
      {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}}};
  const GridPoint start = e.point(first);
  std::vector<GridPoint> contour{start};
  GridPoint p = start;
  int back = 0;  // west of the first raster cell is background
  int first_move = -1;
  const std::size_t limit = 8 * grid.size() + 8;
  for (std::size_t step = 0; step < limit; ++step) {
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      if (grid.test(GridPoint(p.x() + kDir[d][0], p.y() + kDir[d][1]))) {
        found = d;
        break;
      }
    }
    if (found < 0) return contour;  // isolated cell
    if (step == 0)
      first_move = found;
    else if (p == start && found == first_move)
      break;
    const int pd = (found + 7) % 8;
    const GridPoint prev_cell(p.x() + kDir[pd][0], p.y() + kDir[pd][1]);
    p = GridPoint(p.x() + kDir[found][0], p.y() + kDir[found][1]);
    // New backtrack: the last background cell examined, seen from p.
    const int bx = prev_cell.x() - p.x(), by = prev_cell.y() - p.y();
    for (int d = 0; d < 8; ++d)
      if (kDir[d][0] == bx && kDir[d][1] == by) back = d;
    contour.push_back(p);
  }
  if (contour.size() > 1 && contour.back() == start) contour.pop_back();
  return contour;
}

namespace {

void clear_frame(BinaryGrid& g) {
  const Extents& e = g.extents();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] && e.on_frame(e.point(i))) g.set(i, false);
}

void paint_disc(BinaryGrid& g, double cx, double cy, int r, bool value) {
  const Extents& e = g.extents();
  const int x0 = static_cast<int>(std::floor(cx + 0.5));
  const int y0 = static_cast<int>(std::floor(cy + 0.5));
  for (int y = y0 - r; y <= y0 + r; ++y)
    for (int x = x0 - r; x <= x0 + r; ++x) {
      const GridPoint q(x, y);
      if (!e.contains(q)) continue;
      if ((x - x0) * (x - x0) + (y - y0) * (y - y0) <= r * r) g.set(q, value);
    }
}

void contour_level(BinaryGrid& g, const NoiseSpec& spec, Rng& rng) {
  const std::vector<GridPoint> contour = trace_contour(g);
  const auto n = static_cast<long>(contour.size());
  if (n == 0) return;
  BinaryGrid out = g;
  for (long i = 0; i < n; ++i) {
    if (rng.uniform() >= spec.p_deform) continue;
    const bool protrude = rng.uniform() < 0.5;
    const int radius = static_cast<int>(std::ceil(std::abs(2.0 * rng.normal())));
    for (long j = i - spec.neighborhood; j <= i + spec.neighborhood; ++j) {
      const GridPoint& p = contour[static_cast<std::size_t>(((j % n) + n) % n)];
      const GridPoint& a = contour[static_cast<std::size_t>((((j - 1) % n) + n) % n)];
      const GridPoint& b = contour[static_cast<std::size_t>((((j + 1) % n) + n) % n)];
      // Normal to the central-difference tangent, v = (-y', x').
      double vx = -(b.y() - a.y());
      double vy = b.x() - a.x();
      // Orient away from the local foreground centroid.
      double sx = 0.0, sy = 0.0, cnt = 0.0;
      for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx)
          if (g.test(GridPoint(p.x() + dx, p.y() + dy))) {
            sx += dx;
            sy += dy;
            cnt += 1.0;
          }
      const double ox = -sx / std::max(cnt, 1.0), oy = -sy / std::max(cnt, 1.0);
      if (vx == 0.0 && vy == 0.0) {
        vx = ox;
        vy = oy;
      } else if (vx * ox + vy * oy < 0.0) {
        vx = -vx;
        vy = -vy;
      }
      const double len = std::hypot(vx, vy);
      if (len > 0.0) {
        vx /= len;
        vy /= len;
      }
      const double sign = protrude ? 1.0 : -1.0;
      paint_disc(out, p.x() + sign * vx, p.y() + sign * vy, radius, protrude);
    }
  }
  clear_frame(out);
  out = keep_largest_component(out);
  if (out.count() > 0) g = std::move(out);
}

void eden_level(BinaryGrid& g, const NoiseSpec& spec, Rng& rng) {
  const Extents& e = g.extents();
  const auto offsets = neighbor_offsets(3);
  std::size_t events = static_cast<std::size_t>(spec.events_per_level);
  if (events == 0) events = (boundary_size(g) + 99) / 100;

  std::vector<std::size_t> candidates;
  std::vector<std::int64_t> slot(g.size(), -1);
  auto consider = [&](std::size_t i) {
    if (g[i] || slot[i] >= 0 || e.on_frame(e.point(i))) return;
    slot[i] = static_cast<std::int64_t>(candidates.size());
    candidates.push_back(i);
  };
  auto visit_neighbours = [&](std::size_t i, auto&& fn) {
    const GridPoint p = e.point(i);
    for (const auto& d : offsets) {
      const GridPoint q(p.x() + d.x(), p.y() + d.y(), p.z() + d.z());
      if (e.contains(q)) fn(e.index(q));
    }
  };
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i]) visit_neighbours(i, consider);

  for (std::size_t k = 0; k < events && !candidates.empty(); ++k) {
    const std::size_t pick = static_cast<std::size_t>(rng.below(candidates.size()));
    const std::size_t cell = candidates[pick];
    candidates[pick] = candidates.back();
    slot[candidates[pick]] = static_cast<std::int64_t>(pick);
    candidates.pop_back();
    slot[cell] = -1;
    g.set(cell, true);
    visit_neighbours(cell, consider);
  }
}

}  // namespace

BinaryGrid apply_noise(const BinaryGrid& grid, const NoiseSpec& spec) {
  spec.validate();
  if ((spec.kind == NoiseKind::Contour2D) != (grid.rank() == 2))
    throw ParameterError("noise kind does not match grid dimensionality");
  if (spec.level == 0) return grid;
  if (grid.count() == 0) throw DomainError("cannot perturb an empty shape");
  BinaryGrid g = grid;
  clear_frame(g);
  Rng rng(spec.seed);
  for (int k = 0; k < spec.level; ++k) {
    if (spec.kind == NoiseKind::Contour2D)
      contour_level(g, spec, rng);
    else
      eden_level(g, spec, rng);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Rotations

namespace {

std::pair<double, double> cos_sin_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0) r += 360.0;
  if (r == 0.0) return {1.0, 0.0};
  if (r == 90.0) return {0.0, 1.0};
  if (r == 180.0) return {-1.0, 0.0};
  if (r == 270.0) return {0.0, -1.0};
  const double rad = deg * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

bool is_lattice_map(const std::array<double, 9>& m) {
  return std::all_of(m.begin(), m.end(), [](double v) { return v == 0.0 || v == 1.0 || v == -1.0; });
}

std::array<double, 3> centre(const Extents& e) {
  return {(e[0] - 1) / 2.0, (e[1] - 1) / 2.0, e.rank() == 3 ? (e[2] - 1) / 2.0 : 0.0};
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

std::array<double, 9> rotation_matrix(const RotationSpec& spec, int rank) {
  if (rank == 2) {
    const auto [c, s] = cos_sin_degrees(spec.angle2d);
    return {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
  }
  const auto [ca, sa] = cos_sin_degrees(spec.azimuth);
  const auto [ce, se] = cos_sin_degrees(spec.elevation);
  const std::array<double, 9> az{ca, -sa, 0.0, sa, ca, 0.0, 0.0, 0.0, 1.0};
  const std::array<double, 9> el{ce, 0.0, se, 0.0, 1.0, 0.0, -se, 0.0, ce};
  std::array<double, 9> m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += az[i * 3 + k] * el[k * 3 + j];
      m[i * 3 + j] = acc;
    }
  return m;
}

Extents rotated_extents(const Extents& source, const RotationSpec& spec) {
  const int rank = source.rank();
  const auto m = rotation_matrix(spec, rank);
  const int margin = is_lattice_map(m) ? 0 : 2;
  std::array<int, 3> n{1, 1, 1};
  for (int i = 0; i < rank; ++i) {
    double span = 0.0;
    for (int j = 0; j < rank; ++j) span += std::abs(m[i * 3 + j]) * (source[j] - 1);
    n[i] = static_cast<int>(std::ceil(span - 1e-9)) + 1 + margin;
  }
  return rank == 2 ? Extents(n[0], n[1]) : Extents(n[0], n[1], n[2]);
}

BinaryGrid rotate_grid(const BinaryGrid& grid, const RotationSpec& spec) {
  const Extents& src = grid.extents();
  const Extents dst = rotated_extents(src, spec);
  const auto m = rotation_matrix(spec, src.rank());
  const auto cs = centre(src);
  const auto cd = centre(dst);
  BinaryGrid out(dst);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const GridPoint q = dst.point(i);
    const double rel[3] = {q.x() - cd[0], q.y() - cd[1], q.z() - cd[2]};
    GridPoint p;
    for (int k = 0; k < 3; ++k) {
      // Inverse rotation is the transpose.
      const double v = m[0 * 3 + k] * rel[0] + m[1 * 3 + k] * rel[1] + m[2 * 3 + k] * rel[2];
      p.c[k] = round_half_up(v + cs[k]);
    }
    if (grid.test(p)) out.set(i, true);
  }
  return out;
}

MedialAxisTransform rotate_points(const MedialAxisTransform& mat, const RotationSpec& spec,
                                  const Extents& source) {
  const Extents dst = rotated_extents(source, spec);
  const auto m = rotation_matrix(spec, source.rank());
  const auto cs = centre(source);
  const auto cd = centre(dst);
  std::vector<MatElement> out;
  out.reserve(mat.size());
  for (const auto& el : mat.elements()) {
    const double rel[3] = {el.point.x() - cs[0], el.point.y() - cs[1], el.point.z() - cs[2]};
    GridPoint q;
    for (int k = 0; k < 3; ++k)
      q.c[k] = round_half_up(m[k * 3 + 0] * rel[0] + m[k * 3 + 1] * rel[1] +
                             m[k * 3 + 2] * rel[2] + cd[k]);
    if (dst.contains(q)) out.push_back({q, el.radius});
  }
  return MedialAxisTransform(dst, std::move(out));
}

BinaryGrid center_crop(const BinaryGrid& grid, const Extents& target) {
  const Extents& src = grid.extents();
  if (src.rank() != target.rank()) throw ParameterError("crop rank mismatch");
  std::array<int, 3> off{0, 0, 0};
  for (int k = 0; k < src.rank(); ++k) off[k] = (src[k] - target[k]) / 2;
  BinaryGrid out(target);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const GridPoint q = target.point(i);
    if (grid.test(GridPoint(q.x() + off[0], q.y() + off[1], q.z() + off[2]))) out.set(i, true);
  }
  return out;
}

BinaryGrid scale_grid(const BinaryGrid& grid, double factor) {
  if (!(factor > 0.0)) throw ParameterError("scale factor must be > 0");
  const Extents& src = grid.extents();
  std::array<int, 3> n{1, 1, 1};
  for (int k = 0; k < src.rank(); ++k)
    n[k] = std::max(3, static_cast<int>(std::ceil(src[k] * factor - 1e-9)));
  const Extents dst = src.rank() == 2 ? Extents(n[0], n[1]) : Extents(n[0], n[1], n[2]);
  BinaryGrid out(dst);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const GridPoint q = dst.point(i);
    GridPoint p;
    for (int k = 0; k < src.rank(); ++k)
      p.c[k] = std::min(src[k] - 1, static_cast<int>(std::floor((q.c[k] + 0.5) / factor)));
    if (grid.at(p)) out.set(i, true);
  }
  return ensure_background_border(out);
}

}  // namespace cpma
