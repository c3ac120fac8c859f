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

#include <cmath>

#include <gtest/gtest.h>

#include "cpma/metrics.hpp"
#include "cpma/perturb.hpp"
#include "oracles.hpp"

using namespace cpma;

TEST(Perturb, LevelZeroIsIdentity) {
  const BinaryGrid g = oracle::disc(40, 19.5, 19.5, 12.0);
  EXPECT_EQ(apply_noise(g, NoiseSpec::for_rank(2, 0, 1)), g);
}

TEST(Perturb, EdenAddsExactlyTheRequestedVoxels) {
  const BinaryGrid g = oracle::box(Extents(20, 20, 20), {5, 5, 5}, {14, 14, 14});
  NoiseSpec s = NoiseSpec::for_rank(3, 1, 9);
  s.events_per_level = 50;
  const BinaryGrid n = apply_noise(g, s);
  EXPECT_EQ(n.count(), g.count() + 50);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i]) EXPECT_TRUE(n[i]);
  EXPECT_EQ(oracle::components(n), 1u);
}

TEST(Perturb, ContourNoiseRoughensDisc) {
  const BinaryGrid g = oracle::disc(128, 63.5, 63.5, 40.0);
  const BinaryGrid n = apply_noise(g, NoiseSpec::for_rank(2, 10, 2024));
  EXPECT_GT(boundary_size(n), boundary_size(g));
  EXPECT_EQ(oracle::components(n), 1u);
  EXPECT_TRUE(n.frame_is_clear());
  EXPECT_EQ(n.extents(), g.extents());
}

TEST(Perturb, NoiseIsReproducibleAndNested) {
  const BinaryGrid g = oracle::disc(96, 47.5, 47.5, 30.0);
  for (int k : {1, 5, 12}) {
    const NoiseSpec s = NoiseSpec::for_rank(2, k, 77);
    EXPECT_EQ(apply_noise(g, s), apply_noise(g, s));
    EXPECT_EQ(oracle::components(apply_noise(g, s)), 1u);
  }
  EXPECT_NE(apply_noise(g, NoiseSpec::for_rank(2, 8, 1)), apply_noise(g, NoiseSpec::for_rank(2, 8, 2)));
}

TEST(Perturb, KindMustMatchRank) {
  const BinaryGrid g = oracle::disc(20, 9.5, 9.5, 5.0);
  EXPECT_THROW(apply_noise(g, NoiseSpec::for_rank(3, 1, 0)), ParameterError);
  NoiseSpec bad = NoiseSpec::for_rank(2, -1, 0);
  EXPECT_THROW(apply_noise(g, bad), ParameterError);
}

TEST(Perturb, ContourIsClosedBoundary) {
  const BinaryGrid g = oracle::box(Extents(8, 7), {2, 2}, {5, 4});
  const auto c = trace_contour(g);
  EXPECT_EQ(c.size(), 10u);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const GridPoint& a = c[k];
    const GridPoint& b = c[(k + 1) % c.size()];
    EXPECT_LE(std::max(std::abs(a.x() - b.x()), std::abs(a.y() - b.y())), 1);
  }
}

TEST(Perturb, QuarterTurnsArePermutations) {
  Rng rng(89);
  const BinaryGrid g = oracle::random_grid(rng, Extents(13, 9), 0.5);
  const BinaryGrid r = rotate_grid(g, RotationSpec::planar(90));
  EXPECT_EQ(r.extents(), Extents(9, 13));
  EXPECT_EQ(r.count(), g.count());
  BinaryGrid back = g;
  for (int k = 0; k < 4; ++k) back = rotate_grid(back, RotationSpec::planar(90));
  EXPECT_EQ(back, g);
  BinaryGrid half = g;
  for (int k = 0; k < 2; ++k) half = rotate_grid(half, RotationSpec::planar(180));
  EXPECT_EQ(half, g);
  const BinaryGrid g3 = oracle::random_grid(rng, Extents(7, 6, 5), 0.5);
  BinaryGrid b3 = g3;
  for (int k = 0; k < 4; ++k) b3 = rotate_grid(b3, RotationSpec::spatial(90, 0));
  EXPECT_EQ(b3, g3);
}

TEST(Perturb, ZeroRotationIsIdentity) {
  Rng rng(97);
  const BinaryGrid g = oracle::random_grid(rng, Extents(11, 10), 0.5);
  EXPECT_EQ(rotate_grid(g, RotationSpec::planar(0)), g);
}

TEST(Perturb, RotateThereAndBack) {
  const BinaryGrid disc = oracle::disc(64, 31.5, 31.5, 20.0);
  const BinaryGrid there = rotate_grid(disc, RotationSpec::planar(30));
  const BinaryGrid back = center_crop(rotate_grid(there, RotationSpec::planar(-30)), disc.extents());
  EXPECT_GE(jaccard(back, disc), 0.95);
}

TEST(Perturb, RotatePointsAboutCentre) {
  const Extents e(41, 41);
  const MedialAxisTransform m(e, {{GridPoint(10, 20), 3.0}, {GridPoint(20, 20), 5.0}});
  const MedialAxisTransform r = rotate_points(m, RotationSpec::planar(90), e);
  const MedialAxisTransform expected(e, {{GridPoint(20, 10), 3.0}, {GridPoint(20, 20), 5.0}});
  EXPECT_EQ(r, expected);
  EXPECT_EQ(rotate_points(m, RotationSpec::planar(0), e), m);
}

TEST(Perturb, RotatePointsAgreesWithRotateGrid) {
  Rng rng(101);
  const BinaryGrid g = oracle::random_grid(rng, Extents(15, 12), 0.3);
  std::vector<MatElement> els;
  for (const auto& p : foreground_points(g)) els.push_back({p, 1.0});
  const MedialAxisTransform m(g.extents(), els);
  for (double a : {90.0, 180.0, 270.0})
    EXPECT_EQ(rotate_points(m, RotationSpec::planar(a), g.extents()).indicator(),
              rotate_grid(g, RotationSpec::planar(a)));
}

TEST(Perturb, ScaleKeepsBorder) {
  const BinaryGrid g = oracle::disc(32, 15.5, 15.5, 10.0);
  const BinaryGrid s = scale_grid(g, 2.0);
  EXPECT_TRUE(s.frame_is_clear());
  EXPECT_NEAR(double(s.count()) / double(g.count()), 4.0, 0.3);
  EXPECT_THROW(scale_grid(g, 0.0), ParameterError);
}
