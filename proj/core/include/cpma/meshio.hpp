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

#pragma once

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

#include "cpma/grid.hpp"

namespace cpma {

struct TriangleMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;
};

/// ASCII PLY 1.0 with a vertex element (x, y, z plus any ignored scalar
/// properties) and a face element whose index lists have length 3.
TriangleMesh parse_ply(const std::filesystem::path& path);
TriangleMesh parse_ply_text(std::string_view text);

void write_ply(const TriangleMesh& mesh, const std::filesystem::path& path);

/// Solid voxelization. The mesh is scaled uniformly so its longest side
/// spans `resolution - 2` voxels, leaving a one-voxel margin. A voxel is
/// foreground when its centre is inside the mesh by ray parity along +x;
/// an odd crossing count on any ray raises VoxelizationError. Only the
/// largest component is kept.
BinaryGrid voxelize(const TriangleMesh& mesh, int resolution = 150);

}  // namespace cpma
