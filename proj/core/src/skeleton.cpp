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

#include "cpma/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace cpma {

std::string_view to_string(PruningMethod m) {
  switch (m) {
    case PruningMethod::MAT: return "MAT";
    case PruningMethod::Thinning: return "Thinning";
    case PruningMethod::GIMA: return "GIMA";
    case PruningMethod::BEMA: return "BEMA";
    case PruningMethod::SAT: return "SAT";
    case PruningMethod::SFEMA: return "SFEMA";
    case PruningMethod::PoissonSkel: return "PoissonSkel";
    case PruningMethod::TEASAR: return "TEASAR";
  }
  return "?";
}

void PrunerSpec::validate() const {
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");
  if (!(theta >= 0.0 && theta <= 180.0)) throw ParameterError("theta must lie in [0, 180]");
  if (!(scale >= 1.0)) throw ParameterError("scale must be >= 1");
}

bool PrunerSpec::implemented() const {
  return method != PruningMethod::PoissonSkel && method != PruningMethod::TEASAR;
}

namespace {

std::string format_number(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::string PrunerSpec::params() const {
  switch (method) {
    case PruningMethod::GIMA: return "gamma=" + format_number(gamma);
    case PruningMethod::BEMA: return "theta=" + format_number(theta);
    case PruningMethod::SAT:
    case PruningMethod::SFEMA: return "s=" + format_number(scale);
    default: return "";
  }
}

namespace {

// For every offset v in the containment window and every squared radius k,
// reach[v][k] = max |u - v|^2 over lattice vectors u with |u|^2 < k. The
// digital ball of squared radius k at x then lies inside the one of squared
// radius k' at x + v iff reach[v][k] < k'.
class ContainmentTable {
 public:
  ContainmentTable(int rank, std::int64_t max_sq) : max_sq_(max_sq) {
    const int w = kContainmentWindow;
    const int zw = rank == 3 ? w : 0;
    for (int z = -zw; z <= zw; ++z)
      for (int y = -w; y <= w; ++y)
        for (int x = -w; x <= w; ++x)
          if (x != 0 || y != 0 || z != 0) offsets_.emplace_back(x, y, z);
    // Nearer offsets first: they are the likelier witnesses.
    std::stable_sort(offsets_.begin(), offsets_.end(), [](const GridPoint& a, const GridPoint& b) {
      return squared_distance(a, {}) < squared_distance(b, {});
    });

    const auto shells = ShellTable::get(rank, max_sq);
    const std::size_t stride = static_cast<std::size_t>(max_sq) + 1;
    reach_.assign(offsets_.size() * stride, 0);
    std::vector<std::int64_t> running(offsets_.size(), -1);
    for (std::int64_t k = 1; k <= max_sq; ++k) {
      for (const GridPoint& u : shells->shell(k - 1))
        for (std::size_t v = 0; v < offsets_.size(); ++v)
          running[v] = std::max(running[v], squared_distance(u, offsets_[v]));
      for (std::size_t v = 0; v < offsets_.size(); ++v) reach_[v * stride + k] = running[v];
    }
  }

  std::int64_t max_sq() const { return max_sq_; }
  std::span<const GridPoint> offsets() const { return offsets_; }
  std::int64_t reach(std::size_t v, std::int64_t k) const {
    return reach_[v * (static_cast<std::size_t>(max_sq_) + 1) + static_cast<std::size_t>(k)];
  }

  static std::shared_ptr<const ContainmentTable> get(int rank, std::int64_t max_sq) {
    static std::mutex mutex;
    static std::shared_ptr<const ContainmentTable> cache[2];
    std::lock_guard lock(mutex);
    auto& slot = cache[rank == 3 ? 1 : 0];
    if (!slot || slot->max_sq() < max_sq)
      slot = std::make_shared<const ContainmentTable>(
          rank, std::max<std::int64_t>({max_sq, slot ? 2 * slot->max_sq() : 0, 64}));
    return slot;
  }

 private:
  std::int64_t max_sq_;
  std::vector<GridPoint> offsets_;
  std::vector<std::int64_t> reach_;
};

}  // namespace

MedialAxisTransform extract_mat(const BinaryGrid& grid, const DistanceField& field) {
  const Extents& e = grid.extents();
  const auto table = ContainmentTable::get(e.rank(), std::max<std::int64_t>(field.max_sq(), 1));
  std::vector<MatElement> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i]) continue;
    const GridPoint x = e.point(i);
    const std::int64_t kx = field.sq[i];

    // Ray witness: the next lattice point y on the ray from the feature point
    // through x with D(y) == D(x) + |x - y|, i.e. sq(y) g^2 == sq(x) (g + 1)^2.
    const GridPoint f = field.feature_point(i);
    const int dx = x.x() - f.x(), dy = x.y() - f.y(), dz = x.z() - f.z();
    const int g = std::gcd(std::gcd(std::abs(dx), std::abs(dy)), std::abs(dz));
    const GridPoint ray(x.x() + dx / g, x.y() + dy / g, x.z() + dz / g);
    bool swallowed = false;
    if (grid.test(ray)) {
      const std::int64_t g2 = std::int64_t{g} * g;
      const std::int64_t h2 = std::int64_t{g + 1} * (g + 1);
      swallowed = field.sq_at(ray) * g2 == kx * h2;
    }

    // Digital witness inside the window.
    const auto offsets = table->offsets();
    for (std::size_t v = 0; v < offsets.size() && !swallowed; ++v) {
      const GridPoint y(x.x() + offsets[v].x(), x.y() + offsets[v].y(), x.z() + offsets[v].z());
      if (!e.contains(y)) continue;
      const std::int64_t ky = field.sq_at(y);
      swallowed = ky > kx && table->reach(v, kx) < ky;
    }
    if (!swallowed) out.push_back({x, field.dist(i)});
  }
  return MedialAxisTransform(e, std::move(out));
}

MedialAxisTransform extract_mat(const BinaryGrid& grid) {
  if (grid.count() == 0) return MedialAxisTransform(grid.extents());
  return extract_mat(grid, edt(grid));
}

BinaryGrid reconstruct(const MedialAxisTransform& mat, const Extents& extents) {
  BinaryGrid out(extents);
  const bool is3d = extents.rank() == 3;
  for (const auto& el : mat.elements()) {
    const GridPoint& c = el.point;
    if (!extents.contains(c)) throw ParameterError("medial axis point outside reconstruction grid");
    out.set(c, true);
    const double r2 = el.radius * el.radius - 1e-7;
    const int r = static_cast<int>(std::ceil(el.radius));
    const int z0 = is3d ? std::max(0, c.z() - r) : 0;
    const int z1 = is3d ? std::min(extents.nz() - 1, c.z() + r) : 0;
    const int y0 = std::max(0, c.y() - r), y1 = std::min(extents.ny() - 1, c.y() + r);
    const int x0 = std::max(0, c.x() - r), x1 = std::min(extents.nx() - 1, c.x() + r);
    for (int z = z0; z <= z1; ++z)
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          const GridPoint p(x, y, z);
          if (static_cast<double>(squared_distance(p, c)) < r2) out.set(p, true);
        }
  }
  return out;
}

namespace {

MedialAxisTransform filter_mat(const MedialAxisTransform& mat, auto keep) {
  std::vector<MatElement> out;
  for (const auto& el : mat.elements())
    if (keep(el)) out.push_back(el);
  return MedialAxisTransform(mat.extents(), std::move(out));
}

template <typename Fn>
void for_each_neighbor(const Extents& e, const GridPoint& p, Fn fn) {
  for (const auto& d : neighbor_offsets(e.rank())) {
    const GridPoint q(p.x() + d.x(), p.y() + d.y(), p.z() + d.z());
    if (e.contains(q)) fn(q);
  }
}

double angle_degrees(const GridPoint& a, const GridPoint& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int k = 0; k < 3; ++k) {
    dot += double(a.c[k]) * b.c[k];
    na += double(a.c[k]) * a.c[k];
    nb += double(b.c[k]) * b.c[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

GridPoint minus(const GridPoint& a, const GridPoint& b) {
  return GridPoint(a.x() - b.x(), a.y() - b.y(), a.z() - b.z());
}

MedialAxisTransform prune_gima(const BinaryGrid& grid, const DistanceField& field,
                               const MedialAxisTransform& mat, double gamma) {
  const double gamma2 = gamma * gamma;
  return filter_mat(mat, [&](const MatElement& el) {
    const GridPoint fx = field.feature_point(el.point);
    bool keep = false;
    for_each_neighbor(grid.extents(), el.point, [&](const GridPoint& q) {
      if (!keep && static_cast<double>(squared_distance(fx, field.feature_point(q))) >= gamma2)
        keep = true;
    });
    return keep;
  });
}

MedialAxisTransform prune_bema(const BinaryGrid& grid, const DistanceField& field,
                               const MedialAxisTransform& mat, double theta) {
  return filter_mat(mat, [&](const MatElement& el) {
    const GridPoint a = minus(field.feature_point(el.point), el.point);
    double best = 0.0;
    for_each_neighbor(grid.extents(), el.point, [&](const GridPoint& q) {
      best = std::max(best, angle_degrees(a, minus(field.feature_point(q), el.point)));
    });
    return best >= theta - 1e-9;
  });
}

MedialAxisTransform prune_sfema(const MedialAxisTransform& mat, double s) {
  const auto el = mat.elements();
  std::vector<std::size_t> order(el.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return el[a].radius > el[b].radius; });
  std::vector<MatElement> out;
  for (std::size_t i = 0; i < el.size(); ++i) {
    const MatElement& x = el[i];
    bool swallowed = false;
    for (std::size_t j : order) {
      const MatElement& y = el[j];
      if (y.radius <= x.radius) break;
      const double gap = s * (y.radius - x.radius);
      if (static_cast<double>(squared_distance(x.point, y.point)) <= gap * gap + 1e-9) {
        swallowed = true;
        break;
      }
    }
    if (!swallowed) out.push_back(x);
  }
  return MedialAxisTransform(mat.extents(), std::move(out));
}

MedialAxisTransform prune_sat(const BinaryGrid& grid, const DistanceField& field,
                              const MedialAxisTransform& mat, double s) {
  std::vector<MatElement> scaled;
  scaled.reserve(mat.size());
  for (const auto& el : mat.elements()) scaled.push_back({el.point, el.radius * s});
  BinaryGrid grown = reconstruct(MedialAxisTransform(mat.extents(), std::move(scaled)),
                                 grid.extents());
  for (std::size_t i = 0; i < grown.size(); ++i)
    if (grown.extents().on_frame(grown.extents().point(i))) grown.set(i, false);
  const MedialAxisTransform axis = extract_mat(grown);
  std::vector<MatElement> out;
  for (const auto& el : axis.elements())
    if (grid.at(el.point)) out.push_back({el.point, field.dist(el.point)});
  return MedialAxisTransform(grid.extents(), std::move(out));
}

}  // namespace

MedialAxisTransform prune(const BinaryGrid& grid, const PrunerSpec& spec) {
  spec.validate();
  if (!spec.implemented())
    throw UnimplementedError("method not implemented: " + std::string(to_string(spec.method)));
  if (grid.count() == 0) return MedialAxisTransform(grid.extents());

  const DistanceField field = edt(grid);
  if (spec.method == PruningMethod::Thinning) {
    const BinaryGrid skel = thin(grid);
    std::vector<MatElement> out;
    for (std::size_t i = 0; i < skel.size(); ++i)
      if (skel[i]) out.push_back({skel.extents().point(i), field.dist(i)});
    return MedialAxisTransform(grid.extents(), std::move(out));
  }

  const MedialAxisTransform mat = extract_mat(grid, field);
  switch (spec.method) {
    case PruningMethod::MAT: return mat;
    case PruningMethod::GIMA: return prune_gima(grid, field, mat, spec.gamma);
    case PruningMethod::BEMA: return prune_bema(grid, field, mat, spec.theta);
    case PruningMethod::SFEMA: return prune_sfema(mat, spec.scale);
    case PruningMethod::SAT: return prune_sat(grid, field, mat, spec.scale);
    default: break;
  }
  throw UnimplementedError("method not implemented: " + std::string(to_string(spec.method)));
}

}  // namespace cpma
