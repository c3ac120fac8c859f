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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "cpma/grid.hpp"
#include "cpma/random.hpp"
#include "oracles.hpp"

using namespace cpma;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cpma_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST(Grid, IndexAndPointRoundTrip) {
  const Extents e(5, 4, 3);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(e.index(e.point(i)), i);
  EXPECT_EQ(e.index(GridPoint(1, 2, 1)), 1u + 5u * (2u + 4u * 1u));
}

TEST(Grid, FullPbmIsPaddedToSixBySix) {
  const fs::path p = temp_path("full4.pbm");
  write_bytes(p, {'P', '4', '\n', '4', ' ', '4', '\n', 0xF0, 0xF0, 0xF0, 0xF0});
  const BinaryGrid g = load_grid(p);
  EXPECT_EQ(g.extents(), Extents(6, 6));
  EXPECT_EQ(g.count(), 16u);
  EXPECT_TRUE(g.frame_is_clear());
  EXPECT_TRUE(g.at(GridPoint(1, 1)));
}

TEST(Grid, EmptyPbmIsDomainError) {
  const fs::path p = temp_path("empty.pbm");
  write_bytes(p, {'P', '4', '\n', '4', ' ', '4', '\n', 0, 0, 0, 0});
  EXPECT_THROW(load_grid(p), DomainError);
}

TEST(Grid, FullVoxIsPaddedToFiveCubed) {
  const fs::path p = temp_path("full3.vox");
  write_bytes(p, {'V', 'O', 'X', ' ', '3', ' ', '3', ' ', '3', '\n', 0xFF, 0xFF, 0xFF, 0xE0});
  const BinaryGrid g = load_grid(p);
  EXPECT_EQ(g.extents(), Extents(5, 5, 5));
  EXPECT_EQ(g.count(), 27u);
}

TEST(Grid, TruncatedRasterReportsOffset) {
  const std::vector<std::uint8_t> bytes{'P', '4', '\n', '8', ' ', '4', '\n', 0xFF};
  try {
    parse_grid(bytes, GridFormat::Pbm2D);
    FAIL() << "expected FormatError";
  } catch (const FormatError& ex) {
    EXPECT_EQ(ex.byte_offset(), bytes.size());
  }
  EXPECT_THROW(parse_grid(std::vector<std::uint8_t>{'P', '1', '\n'}, GridFormat::Pbm2D), FormatError);
}

TEST(Grid, SaveLoadRoundTrip) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const BinaryGrid g2 = oracle::random_grid(rng, Extents(13, 9), 0.5);
    const fs::path p2 = temp_path("rt.pbm");
    save_grid(g2, p2);
    EXPECT_EQ(load_grid(p2), g2);
    const BinaryGrid g3 = oracle::random_grid(rng, Extents(7, 6, 5), 0.5);
    const fs::path p3 = temp_path("rt.vox");
    save_grid(g3, p3);
    EXPECT_EQ(load_grid(p3), g3);
  }
}

TEST(Grid, SaveErrors) {
  const BinaryGrid g = oracle::box(Extents(5, 5), {1, 1}, {3, 3});
  EXPECT_THROW(save_grid(g, temp_path("flat.vox"), GridFormat::Vox3D), ParameterError);
  EXPECT_THROW(save_grid(g, "/nonexistent-dir/x.pbm"), IoError);
}

TEST(Grid, ForegroundPoints) {
  EXPECT_TRUE(foreground_points(BinaryGrid(Extents(4, 4))).empty());
  BinaryGrid g(Extents(5, 5));
  g.set(GridPoint(2, 3), true);
  EXPECT_EQ(foreground_points(g), std::vector<GridPoint>{GridPoint(2, 3)});
  EXPECT_EQ(foreground_points(oracle::box(Extents(5, 5), {1, 1}, {3, 3})).size(), 9u);
}

TEST(Grid, PaddingOnlyWhenFrameTouched) {
  const BinaryGrid inner = oracle::box(Extents(5, 5), {1, 1}, {3, 3});
  EXPECT_EQ(ensure_background_border(inner), inner);
  const BinaryGrid touching = oracle::box(Extents(4, 4), {0, 0}, {1, 1});
  const BinaryGrid padded = ensure_background_border(touching);
  EXPECT_EQ(padded.extents(), Extents(6, 6));
  EXPECT_TRUE(padded.at(GridPoint(1, 1)));
  EXPECT_TRUE(padded.at(GridPoint(2, 2)));
}

TEST(Grid, ComponentsMatchOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryGrid g = oracle::random_grid(rng, trial % 2 ? Extents(9, 8, 7) : Extents(20, 17), 0.3);
    EXPECT_EQ(label_components(g).count(), oracle::components(g));
    if (g.count()) EXPECT_EQ(oracle::components(keep_largest_component(g)), 1u);
  }
}

TEST(Grid, LatticeSymmetriesAreDistinctBijections) {
  Rng rng(3);
  const BinaryGrid g2 = oracle::random_grid(rng, Extents(7, 5), 0.5);
  const auto sym2 = LatticeSymmetry::all(2);
  EXPECT_EQ(sym2.size(), 8u);
  for (const auto& s : sym2) EXPECT_EQ(s.apply(g2).count(), g2.count());
  EXPECT_EQ(LatticeSymmetry::all(3).size(), 48u);
}

TEST(Grid, MatNormalizesOrder) {
  const Extents e(6, 6);
  const MedialAxisTransform m(e, {{GridPoint(3, 3), 2.0}, {GridPoint(1, 1), 1.0}, {GridPoint(3, 3), 2.0}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.elements()[0].point, GridPoint(1, 1));
  EXPECT_THROW(MedialAxisTransform(e, {{GridPoint(9, 9), 1.0}}), ParameterError);
}
