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

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "cpma/cpma.hpp"
#include "cpma/skeleton.hpp"
#include "cpma/transform.hpp"
#include "oracles.hpp"

using namespace cpma;

namespace {

CpmaConfig single_thread() {
  CpmaConfig c;
  c.threads = 1;
  return c;
}

std::vector<std::uint8_t> mask_of(const LatticeGraph& g, const std::vector<GridPoint>& pts) {
  std::vector<std::uint8_t> m(g.node_count(), 0);
  for (const auto& p : pts) m[static_cast<std::size_t>(g.node_of[g.extents.index(p)])] = 1;
  return m;
}

double path_energy(const LatticeGraph& g, const std::vector<std::uint32_t>& path) {
  double s = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    bool found = false;
    for (std::size_t j = g.adj_offset[path[k - 1]]; j < g.adj_offset[path[k - 1] + 1]; ++j)
      if (g.other(g.adj_edge[j], path[k - 1]) == path[k]) {
        s += g.edges[g.adj_edge[j]].weight;
        found = true;
        break;
      }
    EXPECT_TRUE(found) << "path uses a non-edge";
  }
  return s;
}

}  // namespace

TEST(Cpma, EmptyGridGivesZeroField) {
  const ScoreField f = score_function(BinaryGrid(Extents(16, 16)), single_thread());
  EXPECT_TRUE(std::all_of(f.values.begin(), f.values.end(), [](double v) { return v == 0.0; }));
}

TEST(Cpma, ScoresAreFractions) {
  Rng rng(61);
  const BinaryGrid g = oracle::random_blob(rng, Extents(48, 48), 5);
  const CpmaConfig cfg = single_thread();
  const ScoreField f = score_function(g, cfg);
  const int m_used = cfg.resolved_max_freq(g.extents());
  EXPECT_EQ(m_used, 24);
  for (double v : f.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    const double k = v * m_used;
    EXPECT_NEAR(k, std::round(k), 1e-9);
  }
}

TEST(Cpma, ScoreMatchesPerFrequencyPipeline) {
  // Independent assembly of the score from the public building blocks.
  const BinaryGrid g = oracle::disc(32, 14.0, 16.5, 9.0);
  const CpmaConfig cfg = single_thread();
  const int m_used = cfg.resolved_max_freq(g.extents());
  const SpectralField s = dct_forward(g);
  std::vector<double> hits(g.size(), 0.0);
  for (int i = 1; i < m_used; ++i) {
    BinaryGrid r = lowpass_reconstruct(s, i, cfg.bin_threshold);
    for (std::size_t k = 0; k < r.size(); ++k)
      if (r.extents().on_frame(r.extents().point(k))) r.set(k, false);
    for (const auto& p : oracle::medial_points(r, kContainmentWindow)) hits[g.extents().index(p)] += 1.0;
  }
  const ScoreField f = score_function(g, cfg);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(f[k], hits[k] / m_used, 1e-12);
}

TEST(Cpma, DiscScorePeaksAtCentre) {
  const BinaryGrid g = oracle::disc(64, 32.0, 32.0, 18.0);
  const ScoreField f = score_function(g, single_thread());
  const auto best = std::max_element(f.values.begin(), f.values.end());
  EXPECT_EQ(g.extents().point(static_cast<std::size_t>(best - f.values.begin())), GridPoint(32, 32));
}

TEST(Cpma, ThresholdKeepsOnlyHighScores) {
  const BinaryGrid g = oracle::box(Extents(6, 3), {1, 1}, {4, 1});
  ScoreField f(g.extents(), 0.0);
  f.values[g.extents().index(GridPoint(1, 1))] = 0.9;
  f.values[g.extents().index(GridPoint(3, 1))] = 0.1;
  const MedialAxisTransform m = threshold_score(g, edt(g), f, 0.47);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.elements()[0].point, GridPoint(1, 1));
  EXPECT_EQ(m.elements()[0].radius, 1.0);
}

TEST(Cpma, HighThresholdLeavesAlmostNothing) {
  Rng rng(67);
  const BinaryGrid g = oracle::random_blob(rng, Extents(48, 48), 5);
  CpmaConfig cfg = single_thread();
  cfg.tau = 0.999;
  EXPECT_LE(extract_cpma(g, cfg).axis.size(), 1u);
}

TEST(Cpma, ConfigValidation) {
  const Extents e(32, 32);
  CpmaConfig c;
  c.tau = 1.0;
  EXPECT_THROW(c.validate(e), ParameterError);
  c = {};
  c.max_freq = 33;
  EXPECT_THROW(c.validate(e), ParameterError);
  c = {};
  EXPECT_NO_THROW(c.validate(e));
  EXPECT_EQ(c.resolved_max_freq(Extents(31, 20)), 16);
}

TEST(Cpma, LatticeWeights) {
  const BinaryGrid g = oracle::box(Extents(6, 6), {1, 1}, {4, 4});
  for (double v : {0.0, 1.0}) {
    const LatticeGraph lg = build_lattice(g, ScoreField(g.extents(), v));
    EXPECT_EQ(lg.node_count(), 16u);
    EXPECT_EQ(lg.edges.size(), 42u);  // 24 axial + 18 diagonal
    for (const auto& e : lg.edges) EXPECT_EQ(e.weight, 1.0 - v);
  }
  ScoreField f(g.extents(), 0.0);
  f.values[g.extents().index(GridPoint(1, 1))] = 0.8;
  f.values[g.extents().index(GridPoint(2, 1))] = 0.4;
  const LatticeGraph lg = build_lattice(g, f);
  const auto a = static_cast<std::uint32_t>(lg.node_of[g.extents().index(GridPoint(1, 1))]);
  const auto b = static_cast<std::uint32_t>(lg.node_of[g.extents().index(GridPoint(2, 1))]);
  const auto it = std::find_if(lg.edges.begin(), lg.edges.end(),
                               [&](const auto& e) { return e.a == std::min(a, b) && e.b == std::max(a, b); });
  ASSERT_NE(it, lg.edges.end());
  EXPECT_NEAR(it->weight, 0.4, 1e-15);
}

TEST(Cpma, DijkstraMatchesExhaustiveEnumeration) {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryGrid g = oracle::box(Extents(6, 5), {1, 1}, {4, 3});
    ScoreField f(g.extents(), 0.0);
    for (auto& v : f.values) v = rng.uniform();
    const LatticeGraph lg = build_lattice(g, f);
    const auto src = mask_of(lg, {GridPoint(1, 1)});
    const auto dst = mask_of(lg, {GridPoint(4, 3), GridPoint(4, 1)});
    const auto path = min_energy_path(lg, src, dst);
    ASSERT_FALSE(path.empty());
    std::vector<std::uint8_t> seen(lg.node_count(), 0);
    double best = 1e300;
    seen[path.front()] = 1;
    oracle::enumerate_paths(lg, dst, path.front(), 0.0, seen, best);
    EXPECT_NEAR(path_energy(lg, path), best, 1e-12);
    EXPECT_TRUE(src[path.front()] && dst[path.back()]);
  }
}

TEST(Cpma, DijkstraMatchesBellmanFordOnLargeSquare) {
  Rng rng(73);
  const BinaryGrid g = oracle::box(Extents(34, 34), {1, 1}, {32, 32});
  ScoreField f(g.extents(), 0.0);
  for (auto& v : f.values) v = rng.uniform();
  const LatticeGraph lg = build_lattice(g, f);
  const auto src = mask_of(lg, {GridPoint(2, 2), GridPoint(3, 2)});
  const auto dst = mask_of(lg, {GridPoint(30, 31)});
  const auto path = min_energy_path(lg, src, dst);
  EXPECT_NEAR(path_energy(lg, path), oracle::least_energy(lg, src, dst), 1e-9);
}

TEST(Cpma, ConnectedInputIsUnchanged) {
  const BinaryGrid g = oracle::box(Extents(12, 5), {1, 1}, {10, 3});
  const DistanceField d = edt(g);
  std::vector<MatElement> els;
  for (int x = 2; x <= 9; ++x) els.push_back({GridPoint(x, 2), d.dist(GridPoint(x, 2))});
  const MedialAxisTransform axis(g.extents(), els);
  const ConnectResult r = connect_cpma(axis, ScoreField(g.extents(), 0.5), g, single_thread());
  EXPECT_EQ(r.axis, axis);
  EXPECT_TRUE(r.connected);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Cpma, CorridorPathIsUnique) {
  const BinaryGrid g = oracle::box(Extents(14, 3), {1, 1}, {12, 1});
  const MedialAxisTransform axis(g.extents(), {{GridPoint(2, 1), 1.0}, {GridPoint(10, 1), 1.0}});
  const ConnectResult r = connect_cpma(axis, ScoreField(g.extents(), 0.3), g, single_thread());
  EXPECT_TRUE(r.connected);
  EXPECT_EQ(r.axis.size(), 9u);
  for (int x = 2; x <= 10; ++x) EXPECT_TRUE(r.axis.contains(GridPoint(x, 1)));
}

TEST(Cpma, PathFollowsHighScoreAxis) {
  // Uniform high score on the horizontal axis of a 32x32 square.
  const BinaryGrid g = oracle::box(Extents(34, 34), {1, 1}, {32, 32});
  ScoreField f(g.extents(), 0.0);
  for (int x = 1; x <= 32; ++x) f.values[g.extents().index(GridPoint(x, 16))] = 0.9;
  const DistanceField d = edt(g);
  const MedialAxisTransform axis(g.extents(), {{GridPoint(4, 16), d.dist(GridPoint(4, 16))},
                                               {GridPoint(28, 16), d.dist(GridPoint(28, 16))}});
  const ConnectResult r = connect_cpma(axis, f, g, single_thread());
  ASSERT_TRUE(r.connected);
  std::vector<double> fg;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i]) fg.push_back(f[i]);
  std::nth_element(fg.begin(), fg.begin() + static_cast<long>(fg.size() / 2), fg.end());
  const double median = fg[fg.size() / 2];
  for (const auto& el : r.axis.elements()) {
    EXPECT_GE(f.at(el.point), median);
    EXPECT_EQ(el.radius, d.dist(el.point));
  }
}

TEST(Cpma, ConnectionContract) {
  Rng rng(79);
  for (int trial = 0; trial < 5; ++trial) {
    const BinaryGrid g = oracle::random_blob(rng, Extents(64, 64), 6);
    const CpmaResult res = extract_cpma(g, single_thread());
    const ConnectResult c = connect_cpma(res.axis, res.score, g, single_thread());
    EXPECT_FALSE(c.cap_reached);
    EXPECT_TRUE(c.connected);
    EXPECT_EQ(oracle::components(c.axis.indicator()), 1u);
    for (const auto& el : res.axis.elements()) EXPECT_TRUE(c.axis.contains(el.point));
    for (const auto& el : c.axis.elements()) EXPECT_TRUE(g.at(el.point));
    EXPECT_EQ(connect_cpma(c.axis, res.score, g, single_thread()).axis, c.axis);
  }
}

TEST(Cpma, DisconnectedForegroundIsReported) {
  BinaryGrid g = oracle::box(Extents(20, 5), {1, 1}, {6, 3});
  const BinaryGrid h = oracle::box(Extents(20, 5), {12, 1}, {18, 3});
  for (std::size_t i = 0; i < g.size(); ++i)
    if (h[i]) g.set(i, true);
  const MedialAxisTransform axis(g.extents(), {{GridPoint(3, 2), 2.0}, {GridPoint(15, 2), 2.0}});
  const ConnectResult r = connect_cpma(axis, ScoreField(g.extents(), 0.5), g, single_thread());
  EXPECT_FALSE(r.connected);
  EXPECT_TRUE(r.foreground_disconnected);
  EXPECT_FALSE(r.cap_reached);
}

TEST(Cpma, ThreadCountDoesNotChangeScores) {
  Rng rng(83);
  const BinaryGrid g = oracle::random_blob(rng, Extents(40, 40), 4);
  CpmaConfig many;
  many.threads = 4;
  EXPECT_EQ(score_function(g, single_thread()).values, score_function(g, many).values);
}
