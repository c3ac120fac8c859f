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

#include <vector>

#include "cpma/grid.hpp"

namespace cpma {

/// DCT-II coefficients of a grid, one per cell, indexed like the grid
/// (frequency u along x, v along y, w along z).
///
/// Scaling is orthonormal: along an axis of length N the basis is
/// a(u) cos(pi (2x + 1) u / 2N) with a(0) = sqrt(1/N) and a(u) = sqrt(2/N)
/// otherwise. The inverse is the transpose, so a full-band round trip is
/// the identity for every grid size.
struct SpectralField {
  Extents extents;
  std::vector<double> coeffs;

  double at(int u, int v, int w = 0) const { return coeffs[extents.index(GridPoint(u, v, w))]; }
};

/// Orthonormal DCT-II along one axis of length n: basis(u, x).
double dct_basis(int n, int u, int x);

SpectralField dct_forward(const BinaryGrid& grid);
SpectralField dct_forward(const Field<double>& field);

/// Inverse of dct_forward over every coefficient.
Field<double> idct_full(const SpectralField& spectrum);

/// Inverse transform keeping only coefficients whose every frequency
/// index is below `frequencies` (per axis, capped at the axis extent).
Field<double> lowpass_field(const SpectralField& spectrum, int frequencies);

/// Binarized low-pass reconstruction. A cell is foreground when its value
/// exceeds `bin_threshold` by more than kBinarizeMargin, which makes cells
/// sitting exactly on the level set resolve the same way in every
/// mirrored or transposed copy of the input.
BinaryGrid lowpass_reconstruct(const SpectralField& spectrum, int frequencies,
                               double bin_threshold = 0.5);

inline constexpr double kBinarizeMargin = 1e-9;

}  // namespace cpma
