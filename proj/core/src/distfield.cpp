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

#include "cpma/distfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace cpma {

namespace {

constexpr std::int64_t kInf = std::int64_t{1} << 50;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over integer
// sampled values; kInf entries carry no parabola.
class Envelope1D {
 public:
  void run(const std::int64_t* f, std::size_t stride, int n, std::int64_t* out) {
    v_.resize(static_cast<std::size_t>(n));
    z_.resize(static_cast<std::size_t>(n) + 1);
    int k = -1;
    for (int q = 0; q < n; ++q) {
      const std::int64_t fq = f[static_cast<std::size_t>(q) * stride];
      if (fq >= kInf) continue;
      if (k < 0) {
        k = 0;
        v_[0] = q;
        z_[0] = -std::numeric_limits<double>::infinity();
        z_[1] = std::numeric_limits<double>::infinity();
        continue;
      }
      double s = intersect(f, stride, q, v_[k]);
      while (s <= z_[k]) {
        --k;
        s = intersect(f, stride, q, v_[k]);
      }
      ++k;
      v_[k] = q;
      z_[k] = s;
      z_[k + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) {
      for (int q = 0; q < n; ++q) out[static_cast<std::size_t>(q) * stride] = kInf;
      return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
      while (z_[j + 1] < q) ++j;
      const std::int64_t d = q - v_[j];
      out[static_cast<std::size_t>(q) * stride] =
          d * d + f[static_cast<std::size_t>(v_[j]) * stride];
    }
  }

 private:
  static double intersect(const std::int64_t* f, std::size_t stride, int q, int p) {
    const double fq = static_cast<double>(f[static_cast<std::size_t>(q) * stride]);
    const double fp = static_cast<double>(f[static_cast<std::size_t>(p) * stride]);
    return ((fq + double(q) * q) - (fp + double(p) * p)) / (2.0 * (q - p));
  }

  std::vector<int> v_;
  std::vector<double> z_;
};

}  // namespace

std::vector<std::int64_t> squared_edt(const BinaryGrid& grid) {
  const Extents& e = grid.extents();
  std::vector<std::int64_t> a(grid.size());
  bool any_background = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a[i] = grid[i] ? kInf : 0;
    any_background |= !grid[i];
  }
  if (!any_background) throw DomainError("distance transform needs at least one background cell");

  std::vector<std::int64_t> b(grid.size());
  Envelope1D env;
  const std::size_t nx = static_cast<std::size_t>(e.nx());
  const std::size_t ny = static_cast<std::size_t>(e.ny());
  const std::size_t nz = static_cast<std::size_t>(e.nz());
  // Lines along each axis in turn, writing into the other buffer.
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t y = 0; y < ny; ++y) {
      const std::size_t base = nx * (y + ny * z);
      env.run(a.data() + base, 1, e.nx(), b.data() + base);
    }
  for (std::size_t z = 0; z < nz; ++z)
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t base = x + nx * ny * z;
      env.run(b.data() + base, nx, e.ny(), a.data() + base);
    }
  if (e.rank() == 3) {
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t x = 0; x < nx; ++x) {
        const std::size_t base = x + nx * y;
        env.run(a.data() + base, nx * ny, e.nz(), b.data() + base);
      }
    return b;
  }
  return a;
}

double DistanceField::dist(std::size_t i) const {
  return std::sqrt(static_cast<double>(sq[i]));
}

std::int64_t DistanceField::max_sq() const {
  return sq.empty() ? 0 : *std::max_element(sq.begin(), sq.end());
}

DistanceField edt(const BinaryGrid& grid) {
  DistanceField out;
  out.extents = grid.extents();
  out.sq = squared_edt(grid);
  out.feature.resize(grid.size());
  const auto table = ShellTable::get(grid.rank(), out.max_sq());
  const Extents& e = grid.extents();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i]) {
      out.feature[i] = i;
      continue;
    }
    const GridPoint p = e.point(i);
    bool found = false;
    // Shell vectors are lexicographic in (z, y, x), which is the same as
    // ascending linearized index of p + v for in-grid targets.
    for (const GridPoint& v : table->shell(out.sq[i])) {
      const GridPoint q(p.x() + v.x(), p.y() + v.y(), p.z() + v.z());
      if (e.contains(q) && !grid.at(q)) {
        out.feature[i] = e.index(q);
        found = true;
        break;
      }
    }
    if (!found) throw Error("feature transform: no background cell on the distance shell");
  }
  return out;
}

std::vector<GridPoint> projection_set(const BinaryGrid& grid, const DistanceField& field,
                                      const GridPoint& p) {
  std::vector<GridPoint> out;
  const std::int64_t n = field.sq_at(p);
  if (n == 0) return out;
  const auto table = ShellTable::get(grid.rank(), n);
  for (const GridPoint& v : table->shell(n)) {
    const GridPoint q(p.x() + v.x(), p.y() + v.y(), p.z() + v.z());
    if (grid.extents().contains(q) && !grid.at(q)) out.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------

ShellTable::ShellTable(int rank, std::int64_t max_norm) : rank_(rank), max_norm_(max_norm) {
  const int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(max_norm)))) + 1;
  const int rz = rank == 3 ? r : 0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_norm) + 2, 0);
  auto visit = [&](auto&& fn) {
    for (int z = -rz; z <= rz; ++z)
      for (int y = -r; y <= r; ++y)
        for (int x = -r; x <= r; ++x) {
          const std::int64_t n = std::int64_t{x} * x + std::int64_t{y} * y + std::int64_t{z} * z;
          if (n <= max_norm) fn(x, y, z, n);
        }
  };
  visit([&](int, int, int, std::int64_t n) { ++counts[static_cast<std::size_t>(n)]; });
  start_.assign(counts.size(), 0);
  for (std::size_t n = 1; n < counts.size(); ++n) start_[n] = start_[n - 1] + counts[n - 1];
  vectors_.resize(start_.back() + counts.back());
  std::vector<std::size_t> fill(start_.begin(), start_.end());
  visit([&](int x, int y, int z, std::int64_t n) {
    vectors_[fill[static_cast<std::size_t>(n)]++] = GridPoint(x, y, z);
  });
}

std::span<const GridPoint> ShellTable::shell(std::int64_t norm) const {
  if (norm < 0 || norm > max_norm_) throw ParameterError("shell norm outside table range");
  const auto n = static_cast<std::size_t>(norm);
  return std::span<const GridPoint>(vectors_).subspan(start_[n], start_[n + 1] - start_[n]);
}

std::shared_ptr<const ShellTable> ShellTable::get(int rank, std::int64_t max_norm) {
  static std::mutex mutex;
  static std::shared_ptr<const ShellTable> cache[2];
  const int slot = rank == 3 ? 1 : 0;
  std::lock_guard lock(mutex);
  auto& entry = cache[slot];
  if (!entry || entry->max_norm() < max_norm) {
    // Grow geometrically so repeated calls with creeping maxima stay cheap.
    const std::int64_t target = std::max<std::int64_t>(
        max_norm, entry ? entry->max_norm() * 2 : std::max<std::int64_t>(max_norm, 64));
    entry = std::make_shared<const ShellTable>(rank, target);
  }
  return entry;
}

}  // namespace cpma
