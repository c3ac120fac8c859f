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

#include "cpma/cpma.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <queue>
#include <thread>

#include "cpma/skeleton.hpp"
#include "cpma/transform.hpp"

namespace cpma {

int CpmaConfig::resolved_max_freq(const Extents& extents) const {
  return max_freq > 0 ? max_freq : (extents.max_extent() + 1) / 2;
}

void CpmaConfig::validate(const Extents& extents) const {
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
  const int m = resolved_max_freq(extents);
  if (m < 1 || m > extents.max_extent())
    throw ParameterError("max_freq must lie in [1, " + std::to_string(extents.max_extent()) + "]");
  if (max_connect_iters < 1) throw ParameterError("max_connect_iters must be >= 1");
  if (threads < 0) throw ParameterError("threads must be >= 0");
}

ScoreField score_function(const BinaryGrid& grid, const CpmaConfig& cfg) {
  cfg.validate(grid.extents());
  const Extents& e = grid.extents();
  ScoreField out(e, 0.0);
  if (grid.count() == 0) return out;

  const int m = cfg.resolved_max_freq(e);
  const SpectralField spectrum = dct_forward(grid);

  std::vector<std::uint8_t> frame(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) frame[i] = e.on_frame(e.point(i)) ? 1 : 0;

  // Hit counts are integers, so the reduction is order independent.
  auto accumulate = [&](int i, std::vector<std::uint32_t>& hits) {
    BinaryGrid rec = lowpass_reconstruct(spectrum, i, cfg.bin_threshold);
    for (std::size_t k = 0; k < rec.size(); ++k)
      if (frame[k]) rec.set(k, false);
    if (rec.count() == 0) return;
    const MedialAxisTransform axis = extract_mat(rec);
    for (const auto& el : axis.elements()) ++hits[e.index(el.point)];
  };

  const int terms = m - 1;
  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(terms, 1)));
  std::vector<std::vector<std::uint32_t>> partial(workers,
                                                  std::vector<std::uint32_t>(grid.size(), 0));
  if (workers <= 1) {
    for (int i = 1; i <= terms; ++i) accumulate(i, partial[0]);
  } else {
    std::atomic<int> next{1};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = next++; i <= terms; i = next++) accumulate(i, partial[w]);
      });
  }

  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::uint32_t total = 0;
    for (const auto& p : partial) total += p[k];
    out.values[k] = static_cast<double>(total) / m;
  }
  return out;
}

MedialAxisTransform threshold_score(const BinaryGrid& grid, const DistanceField& field,
                                    const ScoreField& score, double tau) {
  if (!(score.extents == grid.extents())) throw ParameterError("score field dims differ from grid");
  std::vector<MatElement> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] && score.values[i] > tau) out.push_back({grid.extents().point(i), field.dist(i)});
  return MedialAxisTransform(grid.extents(), std::move(out));
}

CpmaResult extract_cpma(const BinaryGrid& grid, const CpmaConfig& cfg) {
  ScoreField score = score_function(grid, cfg);
  if (grid.count() == 0) return {MedialAxisTransform(grid.extents()), std::move(score)};
  MedialAxisTransform axis = threshold_score(grid, edt(grid), score, cfg.tau);
  return {std::move(axis), std::move(score)};
}

LatticeGraph build_lattice(const BinaryGrid& grid, const ScoreField& field) {
  if (!(field.extents == grid.extents())) throw ParameterError("score field dims differ from grid");
  const Extents& e = grid.extents();
  LatticeGraph g;
  g.extents = e;
  g.node_of.assign(grid.size(), -1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i]) continue;
    g.node_of[i] = static_cast<std::int64_t>(g.nodes.size());
    g.nodes.push_back(e.point(i));
  }

  const auto offsets = neighbor_offsets(e.rank());
  std::vector<std::size_t> degree(g.nodes.size(), 0);
  for (std::uint32_t a = 0; a < g.nodes.size(); ++a) {
    const GridPoint& p = g.nodes[a];
    const std::size_t pi = e.index(p);
    for (const auto& d : offsets) {
      const GridPoint q(p.x() + d.x(), p.y() + d.y(), p.z() + d.z());
      if (!e.contains(q)) continue;
      const std::size_t qi = e.index(q);
      if (qi <= pi || g.node_of[qi] < 0) continue;
      const auto b = static_cast<std::uint32_t>(g.node_of[qi]);
      g.edges.push_back({a, b, 1.0 - (field.values[pi] + field.values[qi]) / 2.0});
      ++degree[a];
      ++degree[b];
    }
  }

  g.adj_offset.assign(g.nodes.size() + 1, 0);
  for (std::size_t n = 0; n < g.nodes.size(); ++n) g.adj_offset[n + 1] = g.adj_offset[n] + degree[n];
  g.adj_edge.resize(g.adj_offset.back());
  std::vector<std::size_t> fill(g.adj_offset.begin(), g.adj_offset.end() - 1);
  for (std::uint32_t k = 0; k < g.edges.size(); ++k) {
    g.adj_edge[fill[g.edges[k].a]++] = k;
    g.adj_edge[fill[g.edges[k].b]++] = k;
  }
  // Visit neighbours in ascending node order for deterministic relaxation.
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    const auto node = static_cast<std::uint32_t>(n);
    std::sort(g.adj_edge.begin() + static_cast<std::ptrdiff_t>(g.adj_offset[n]),
              g.adj_edge.begin() + static_cast<std::ptrdiff_t>(g.adj_offset[n + 1]),
              [&](std::uint32_t x, std::uint32_t y) { return g.other(x, node) < g.other(y, node); });
  }
  return g;
}

std::vector<std::uint32_t> min_energy_path(const LatticeGraph& graph,
                                           const std::vector<std::uint8_t>& sources,
                                           const std::vector<std::uint8_t>& targets) {
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = graph.node_count();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint32_t> prev(n, kNone);
  std::vector<std::uint8_t> settled(n, 0);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::uint32_t v = 0; v < n; ++v)
    if (sources[v]) {
      dist[v] = 0.0;
      queue.emplace(0.0, v);
    }
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (targets[u]) {
      std::vector<std::uint32_t> path;
      for (std::uint32_t v = u; v != kNone; v = prev[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (std::size_t k = graph.adj_offset[u]; k < graph.adj_offset[u + 1]; ++k) {
      const std::uint32_t edge = graph.adj_edge[k];
      const std::uint32_t v = graph.other(edge, u);
      const double nd = d + graph.edges[edge].weight;
      if (!settled[v] && nd < dist[v]) {
        dist[v] = nd;
        prev[v] = u;
        queue.emplace(nd, v);
      }
    }
  }
  return {};
}

namespace {

struct Piece {
  std::uint32_t label;
  std::size_t size;
  std::size_t first_index;
  std::uint32_t region;  // foreground component label
};

std::vector<Piece> pieces_of(const BinaryGrid& skeleton, const Components& parts,
                             const Components& regions) {
  std::vector<Piece> out(parts.count());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = {static_cast<std::uint32_t>(k + 1), parts.sizes[k],
              std::numeric_limits<std::size_t>::max(), 0};
  for (std::size_t i = 0; i < skeleton.size(); ++i) {
    const auto l = parts.labels[i];
    if (l == 0) continue;
    Piece& p = out[l - 1];
    if (i < p.first_index) {
      p.first_index = i;
      p.region = regions.labels[i];
    }
  }
  std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.first_index < b.first_index;
  });
  return out;
}

}  // namespace

ConnectResult connect_cpma(const MedialAxisTransform& axis, const ScoreField& field,
                           const BinaryGrid& grid, const CpmaConfig& cfg) {
  const Extents& e = grid.extents();
  if (!(axis.extents() == e)) throw ParameterError("axis dims differ from grid");
  for (const auto& el : axis.elements())
    if (!grid.at(el.point)) throw ParameterError("axis point outside the foreground");
  if (cfg.max_connect_iters < 1) throw ParameterError("max_connect_iters must be >= 1");

  ConnectResult result;
  BinaryGrid skeleton = axis.indicator();
  std::vector<MatElement> elements(axis.elements().begin(), axis.elements().end());
  const Components regions = label_components(grid);
  std::optional<LatticeGraph> graph;
  std::optional<DistanceField> dist;

  while (true) {
    const Components parts = label_components(skeleton);
    const auto pieces = pieces_of(skeleton, parts, regions);
    result.connected = pieces.size() <= 1;
    if (result.connected) break;

    // Two largest pieces sharing a foreground component, region by region.
    const Piece* first = nullptr;
    const Piece* second = nullptr;
    std::vector<std::uint32_t> region_order;
    for (const auto& p : pieces) region_order.push_back(p.region);
    std::sort(region_order.begin(), region_order.end());
    region_order.erase(std::unique(region_order.begin(), region_order.end()), region_order.end());
    for (const auto region : region_order) {
      first = second = nullptr;
      for (const auto& p : pieces) {
        if (p.region != region) continue;
        if (!first) {
          first = &p;
        } else {
          second = &p;
          break;
        }
      }
      if (second) break;
    }
    if (!second) {
      result.foreground_disconnected = true;
      break;
    }
    if (result.iterations >= cfg.max_connect_iters) {
      result.cap_reached = true;
      break;
    }

    if (!graph) graph = build_lattice(grid, field);
    if (!dist) dist = edt(grid);
    std::vector<std::uint8_t> src(graph->node_count(), 0), dst(graph->node_count(), 0);
    for (std::size_t i = 0; i < skeleton.size(); ++i) {
      if (parts.labels[i] == first->label) src[static_cast<std::size_t>(graph->node_of[i])] = 1;
      if (parts.labels[i] == second->label) dst[static_cast<std::size_t>(graph->node_of[i])] = 1;
    }
    const auto path = min_energy_path(*graph, src, dst);
    ++result.iterations;
    if (path.empty()) {  // unreachable inside a single region: should not happen
      result.foreground_disconnected = true;
      break;
    }
    for (const auto node : path) {
      const GridPoint& p = graph->nodes[node];
      if (skeleton.at(p)) continue;
      skeleton.set(p, true);
      elements.push_back({p, dist->dist(p)});
    }
  }

  if (result.connected) result.foreground_disconnected = false;
  result.axis = MedialAxisTransform(e, std::move(elements));
  return result;
}

}  // namespace cpma
