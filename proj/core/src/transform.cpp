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

#include "cpma/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace cpma {

namespace {

// cos(pi * m / (2n)) with the argument reduced into [0, pi/2] first, so
// entries related by a mirror of the sample index are exact negatives.
double reduced_cos(long long m, int n) {
  const long long period = 4LL * n;
  m %= period;
  if (m < 0) m += period;
  if (m > 2LL * n) m = period - m;
  if (m > n) return -std::cos(std::numbers::pi * static_cast<double>(2LL * n - m) / (2.0 * n));
  return std::cos(std::numbers::pi * static_cast<double>(m) / (2.0 * n));
}

// rows = frequencies u < rows, cols = samples x < n
std::vector<double> basis_matrix(int n, int rows) {
  std::vector<double> m(static_cast<std::size_t>(rows) * n);
  const double a0 = std::sqrt(1.0 / n);
  const double a = std::sqrt(2.0 / n);
  for (int u = 0; u < rows; ++u)
    for (int x = 0; x < n; ++x)
      m[static_cast<std::size_t>(u) * n + x] =
          (u == 0 ? a0 : a) * reduced_cos(static_cast<long long>(2 * x + 1) * u, n);
  return m;
}

using Shape = std::array<int, 3>;

std::size_t volume(const Shape& s) {
  return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

// Forward: out[u] = sum_x B[u][x] in[x], u < out_len.
// Inverse: out[x] = sum_u B[u][x] in[u], u < in_len.
std::vector<double> transform_axis(const std::vector<double>& in, Shape& shape, int axis,
                                   int out_len, bool inverse, int axis_extent) {
  const int in_len = shape[axis];
  const int rows = inverse ? in_len : out_len;
  const std::vector<double> basis = basis_matrix(axis_extent, rows);

  Shape out_shape = shape;
  out_shape[axis] = out_len;
  std::vector<double> out(volume(out_shape), 0.0);

  std::size_t in_stride = 1, out_stride = 1;
  for (int k = 0; k < axis; ++k) {
    in_stride *= static_cast<std::size_t>(shape[k]);
    out_stride *= static_cast<std::size_t>(out_shape[k]);
  }
  const std::size_t inner = in_stride;  // same for input and output
  std::size_t outer = 1;
  for (int k = axis + 1; k < 3; ++k) outer *= static_cast<std::size_t>(shape[k]);

  std::vector<double> line(static_cast<std::size_t>(in_len));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t in_base = o * in_stride * in_len + i;
      const std::size_t out_base = o * out_stride * out_len + i;
      for (int t = 0; t < in_len; ++t) line[t] = in[in_base + static_cast<std::size_t>(t) * in_stride];
      for (int s = 0; s < out_len; ++s) {
        double acc = 0.0;
        if (inverse) {
          for (int t = 0; t < in_len; ++t)
            acc += basis[static_cast<std::size_t>(t) * axis_extent + s] * line[t];
        } else {
          const double* row = basis.data() + static_cast<std::size_t>(s) * axis_extent;
          for (int t = 0; t < in_len; ++t) acc += row[t] * line[t];
        }
        out[out_base + static_cast<std::size_t>(s) * out_stride] = acc;
      }
    }
  }
  shape = out_shape;
  return out;
}

}  // namespace

double dct_basis(int n, int u, int x) {
  const double a = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return a * reduced_cos(static_cast<long long>(2 * x + 1) * u, n);
}

SpectralField dct_forward(const Field<double>& field) {
  const Extents& e = field.extents;
  Shape shape{e[0], e[1], e[2]};
  std::vector<double> data = field.values;
  for (int axis = 0; axis < e.rank(); ++axis)
    data = transform_axis(data, shape, axis, e[axis], false, e[axis]);
  return SpectralField{e, std::move(data)};
}

SpectralField dct_forward(const BinaryGrid& grid) {
  Field<double> f(grid.extents());
  for (std::size_t i = 0; i < grid.size(); ++i) f.values[i] = grid[i] ? 1.0 : 0.0;
  return dct_forward(f);
}

Field<double> lowpass_field(const SpectralField& spectrum, int frequencies) {
  const Extents& e = spectrum.extents;
  if (frequencies < 1 || frequencies > e.max_extent())
    throw ParameterError("frequency count must lie in [1, " + std::to_string(e.max_extent()) +
                         "], got " + std::to_string(frequencies));
  Shape shape{1, 1, 1};
  for (int k = 0; k < e.rank(); ++k) shape[k] = std::min(frequencies, e[k]);

  std::vector<double> block(volume(shape));
  for (int w = 0; w < shape[2]; ++w)
    for (int v = 0; v < shape[1]; ++v)
      for (int u = 0; u < shape[0]; ++u)
        block[static_cast<std::size_t>(u) +
              static_cast<std::size_t>(shape[0]) * (v + static_cast<std::size_t>(shape[1]) * w)] =
            spectrum.at(u, v, w);

  for (int axis = 0; axis < e.rank(); ++axis)
    block = transform_axis(block, shape, axis, e[axis], true, e[axis]);

  Field<double> out(e);
  out.values = std::move(block);
  return out;
}

Field<double> idct_full(const SpectralField& spectrum) {
  return lowpass_field(spectrum, spectrum.extents.max_extent());
}

BinaryGrid lowpass_reconstruct(const SpectralField& spectrum, int frequencies,
                               double bin_threshold) {
  const Field<double> f = lowpass_field(spectrum, frequencies);
  BinaryGrid g(spectrum.extents);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.values[i] > bin_threshold + kBinarizeMargin) g.set(i, true);
  return g;
}

}  // namespace cpma
