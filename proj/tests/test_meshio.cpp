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
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cpma/meshio.hpp"
#include "oracles.hpp"

using namespace cpma;

TEST(Meshio, CubeFixture) {
  const TriangleMesh m = parse_ply(oracle::fixture("mesh/cube.ply"));
  EXPECT_EQ(m.vertices.size(), 8u);
  EXPECT_EQ(m.faces.size(), 12u);
}

TEST(Meshio, CountMismatchNamesElement) {
  const std::string text =
      "ply\nformat ascii 1.0\nelement vertex 4\nproperty float x\nproperty float y\n"
      "property float z\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n"
      "0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
  try {
    parse_ply_text(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& ex) {
    EXPECT_NE(std::string(ex.what()).find("count mismatch"), std::string::npos) << ex.what();
  }
}

TEST(Meshio, RejectsUnsupportedInput) {
  const std::string header =
      "ply\nformat ascii 1.0\nelement vertex 4\nproperty float x\nproperty float y\n"
      "property float z\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n"
      "0 0 0\n1 0 0\n1 1 0\n0 1 0\n";
  EXPECT_THROW(parse_ply_text(header + "4 0 1 2 3\n"), UnsupportedFormatError);
  EXPECT_THROW(parse_ply_text(header + "3 0 1 9\n"), ParseError);
  EXPECT_THROW(parse_ply_text("ply\nformat binary_little_endian 1.0\nend_header\n"), UnsupportedFormatError);
}

TEST(Meshio, CubeAtResolutionTen) {
  const BinaryGrid g = voxelize(parse_ply(oracle::fixture("mesh/cube.ply")), 10);
  EXPECT_EQ(g.count(), 512u);  // golden: the 8^3 interior block
  EXPECT_GE(g.count(), 343u);
  EXPECT_LE(g.count(), 1000u);
  EXPECT_EQ(oracle::components(g), 1u);
  EXPECT_TRUE(g.frame_is_clear());
}

TEST(Meshio, SphereVolume) {
  const TriangleMesh m = parse_ply(oracle::fixture("mesh/icosphere.ply"));
  const BinaryGrid g = voxelize(m, 64);
  // The longest bounding-box side spans resolution - 2 voxels.
  std::array<double, 3> lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
  double radius = 0.0, longest = 0.0;
  for (const auto& v : m.vertices) {
    for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], v[k]), hi[k] = std::max(hi[k], v[k]);
    radius = std::max(radius, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
  }
  for (int k = 0; k < 3; ++k) longest = std::max(longest, hi[k] - lo[k]);
  const double scale = 62.0 / longest;
  const double expected = 4.0 / 3.0 * std::numbers::pi * std::pow(radius * scale, 3);
  EXPECT_NEAR(double(g.count()) / expected, 1.0, 0.05);
  EXPECT_EQ(oracle::components(g), 1u);
}

TEST(Meshio, OpenMeshIsRejected) {
  TriangleMesh m = parse_ply(oracle::fixture("mesh/cube.ply"));
  m.faces.pop_back();
  EXPECT_THROW(voxelize(m, 16), VoxelizationError);
  EXPECT_THROW(voxelize(parse_ply(oracle::fixture("mesh/cube.ply")), 4), ParameterError);
}

TEST(Meshio, WriteReadRoundTrip) {
  const TriangleMesh m = parse_ply(oracle::fixture("mesh/icosphere.ply"));
  const auto p = std::filesystem::temp_directory_path() / "cpma_roundtrip.ply";
  write_ply(m, p);
  const TriangleMesh back = parse_ply(p);
  EXPECT_EQ(back.faces, m.faces);
  ASSERT_EQ(back.vertices.size(), m.vertices.size());
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(back.vertices[i][k], m.vertices[i][k]);
}
