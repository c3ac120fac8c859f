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

#include "cpma/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace cpma {

double distance(const GridPoint& a, const GridPoint& b) {
  return std::sqrt(static_cast<double>(squared_distance(a, b)));
}

// ---------------------------------------------------------------------------
// Extents

Extents::Extents(int nx, int ny) : n_{nx, ny, 1}, rank_(2) {
  if (nx < 1 || ny < 1) throw ParameterError("grid extents must be positive");
}

Extents::Extents(int nx, int ny, int nz) : n_{nx, ny, nz}, rank_(3) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw ParameterError("grid extents must be positive");
}

int Extents::max_extent() const {
  int m = 0;
  for (int k = 0; k < rank_; ++k) m = std::max(m, n_[k]);
  return m;
}

GridPoint Extents::point(std::size_t index) const {
  const auto nx = static_cast<std::size_t>(n_[0]);
  const auto ny = static_cast<std::size_t>(n_[1]);
  return GridPoint(static_cast<int>(index % nx), static_cast<int>((index / nx) % ny),
                   static_cast<int>(index / (nx * ny)));
}

bool Extents::contains(const GridPoint& p) const {
  for (int k = 0; k < 3; ++k)
    if (p.c[k] < 0 || p.c[k] >= n_[k]) return false;
  return true;
}

bool Extents::on_frame(const GridPoint& p) const {
  for (int k = 0; k < rank_; ++k)
    if (p.c[k] == 0 || p.c[k] == n_[k] - 1) return true;
  return false;
}

std::span<const GridPoint> neighbor_offsets(int rank) {
  static const std::vector<GridPoint> n8 = [] {
    std::vector<GridPoint> v;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (dx != 0 || dy != 0) v.emplace_back(dx, dy, 0);
    return v;
  }();
  static const std::vector<GridPoint> n26 = [] {
    std::vector<GridPoint> v;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (dx != 0 || dy != 0 || dz != 0) v.emplace_back(dx, dy, dz);
    return v;
  }();
  return rank == 3 ? std::span<const GridPoint>(n26) : std::span<const GridPoint>(n8);
}

// ---------------------------------------------------------------------------
// BinaryGrid

BinaryGrid::BinaryGrid(Extents extents, bool fill)
    : extents_(extents), cells_(extents.size(), fill ? 1 : 0) {}

BinaryGrid::BinaryGrid(Extents extents, std::vector<std::uint8_t> cells)
    : extents_(extents), cells_(std::move(cells)) {
  if (cells_.size() != extents_.size())
    throw ParameterError("cell count does not match grid extents");
  for (auto& c : cells_) c = c ? 1 : 0;
}

std::size_t BinaryGrid::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

bool BinaryGrid::frame_is_clear() const {
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i] && extents_.on_frame(extents_.point(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// MedialAxisTransform

MedialAxisTransform::MedialAxisTransform(Extents extents, std::vector<MatElement> elements)
    : extents_(extents), elements_(std::move(elements)) {
  normalize();
}

void MedialAxisTransform::normalize() {
  for (const auto& e : elements_) {
    if (!extents_.contains(e.point))
      throw ParameterError("medial axis point outside its grid");
    if (!(e.radius >= 0.0)) throw ParameterError("medial axis radius must be >= 0");
  }
  std::sort(elements_.begin(), elements_.end(), [&](const MatElement& a, const MatElement& b) {
    return extents_.index(a.point) < extents_.index(b.point);
  });
  elements_.erase(std::unique(elements_.begin(), elements_.end(),
                              [](const MatElement& a, const MatElement& b) {
                                return a.point == b.point;
                              }),
                  elements_.end());
}

std::vector<GridPoint> MedialAxisTransform::points() const {
  std::vector<GridPoint> out;
  out.reserve(elements_.size());
  for (const auto& e : elements_) out.push_back(e.point);
  return out;
}

bool MedialAxisTransform::contains(const GridPoint& p) const {
  const auto key = extents_.index(p);
  auto it = std::lower_bound(elements_.begin(), elements_.end(), key,
                             [&](const MatElement& e, std::size_t k) {
                               return extents_.index(e.point) < k;
                             });
  return it != elements_.end() && it->point == p;
}

BinaryGrid MedialAxisTransform::indicator() const {
  BinaryGrid g(extents_);
  for (const auto& e : elements_) g.set(e.point, true);
  return g;
}

// ---------------------------------------------------------------------------
// Point sets and components

std::vector<GridPoint> foreground_points(const BinaryGrid& grid) {
  std::vector<GridPoint> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i]) out.push_back(grid.extents().point(i));
  return out;
}

BinaryGrid ensure_background_border(const BinaryGrid& grid) {
  if (grid.frame_is_clear()) return grid;
  const Extents& e = grid.extents();
  const Extents padded = e.rank() == 2 ? Extents(e.nx() + 2, e.ny() + 2)
                                       : Extents(e.nx() + 2, e.ny() + 2, e.nz() + 2);
  const int dz = e.rank() == 3 ? 1 : 0;
  BinaryGrid out(padded);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i]) continue;
    const GridPoint p = e.point(i);
    out.set(GridPoint(p.x() + 1, p.y() + 1, p.z() + dz), true);
  }
  return out;
}

Components label_components(const BinaryGrid& grid) {
  const Extents& e = grid.extents();
  const auto offsets = neighbor_offsets(grid.rank());
  Components out;
  out.labels.assign(grid.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < grid.size(); ++seed) {
    if (!grid[seed] || out.labels[seed] != 0) continue;
    const auto label = static_cast<std::uint32_t>(out.sizes.size() + 1);
    std::size_t size = 0;
    out.labels[seed] = label;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      ++size;
      const GridPoint p = e.point(cur);
      for (const auto& d : offsets) {
        const GridPoint q(p.x() + d.x(), p.y() + d.y(), p.z() + d.z());
        if (!e.contains(q)) continue;
        const std::size_t qi = e.index(q);
        if (grid[qi] && out.labels[qi] == 0) {
          out.labels[qi] = label;
          stack.push_back(qi);
        }
      }
    }
    out.sizes.push_back(size);
  }
  return out;
}

BinaryGrid keep_largest_component(const BinaryGrid& grid) {
  const Components comps = label_components(grid);
  if (comps.count() <= 1) return grid;
  const auto best = static_cast<std::uint32_t>(
      std::max_element(comps.sizes.begin(), comps.sizes.end()) - comps.sizes.begin() + 1);
  BinaryGrid out(grid.extents());
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (comps.labels[i] == best) out.set(i, true);
  return out;
}

// ---------------------------------------------------------------------------
// LatticeSymmetry

Extents LatticeSymmetry::apply(const Extents& e) const {
  if (e.rank() == 2) return Extents(e[perm[0]], e[perm[1]]);
  return Extents(e[perm[0]], e[perm[1]], e[perm[2]]);
}

GridPoint LatticeSymmetry::apply(const GridPoint& p, const Extents& source) const {
  GridPoint out;
  for (int k = 0; k < source.rank(); ++k) {
    const int a = perm[k];
    out.c[k] = flip[k] ? source[a] - 1 - p[a] : p[a];
  }
  return out;
}

BinaryGrid LatticeSymmetry::apply(const BinaryGrid& g) const {
  BinaryGrid out(apply(g.extents()));
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i]) out.set(apply(g.extents().point(i), g.extents()), true);
  return out;
}

ScoreField LatticeSymmetry::apply(const ScoreField& f) const {
  ScoreField out(apply(f.extents));
  for (std::size_t i = 0; i < f.values.size(); ++i)
    out.values[out.extents.index(apply(f.extents.point(i), f.extents))] = f.values[i];
  return out;
}

MedialAxisTransform LatticeSymmetry::apply(const MedialAxisTransform& m) const {
  std::vector<MatElement> el;
  el.reserve(m.size());
  for (const auto& e : m.elements()) el.push_back({apply(e.point, m.extents()), e.radius});
  return MedialAxisTransform(apply(m.extents()), std::move(el));
}

std::vector<LatticeSymmetry> LatticeSymmetry::all(int rank) {
  std::vector<LatticeSymmetry> out;
  std::array<int, 3> perm{0, 1, 2};
  const int flips = 1 << rank;
  do {
    if (rank == 2 && perm[2] != 2) continue;
    for (int mask = 0; mask < flips; ++mask) {
      LatticeSymmetry s;
      s.perm = perm;
      for (int k = 0; k < rank; ++k) s.flip[k] = (mask >> k) & 1;
      out.push_back(s);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ---------------------------------------------------------------------------
// File formats
//
// PBM (P4): "P4" header, optional '#' comments, width and height in ASCII,
// a single whitespace byte, then rows packed MSB-first and padded to a
// byte boundary. A set bit (black) is foreground.
//
// VOX-3D: "VOX <nx> <ny> <nz>\n" followed by nx*ny*nz bits packed MSB-first
// in linearized order (x fastest) with no row padding.

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') ++pos_;
    if (start == pos_) throw FormatError("unexpected end of header", pos_);
    return std::string(bytes_.begin() + static_cast<std::ptrdiff_t>(start),
                       bytes_.begin() + static_cast<std::ptrdiff_t>(pos_));
  }

  int positive_int() {
    skip_space_and_comments();
    const std::size_t at = pos_;
    const std::string t = token();
    int v = 0;
    for (char c : t) {
      if (c < '0' || c > '9') throw FormatError("expected a positive integer, got '" + t + "'", at);
      v = v * 10 + (c - '0');
      if (v > (1 << 20)) throw FormatError("dimension too large", at);
    }
    if (v <= 0) throw FormatError("dimension must be positive", at);
    return v;
  }

  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw FormatError("expected whitespace before raster data", pos_);
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

BinaryGrid parse_pbm(std::span<const std::uint8_t> bytes) {
  HeaderReader r(bytes);
  if (r.token() != "P4") throw FormatError("not a binary PBM (expected magic P4)", 0);
  const int w = r.positive_int();
  const int h = r.positive_int();
  r.single_whitespace();
  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  const std::size_t need = row_bytes * static_cast<std::size_t>(h);
  const std::size_t start = r.offset();
  if (bytes.size() - start < need)
    throw FormatError("raster truncated: expected " + std::to_string(need) + " bytes",
                      bytes.size());
  BinaryGrid g(Extents(w, h));
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = bytes.data() + start + row_bytes * static_cast<std::size_t>(y);
    for (int x = 0; x < w; ++x)
      if (row[x / 8] & (0x80u >> (x % 8))) g.set(GridPoint(x, y), true);
  }
  return g;
}

BinaryGrid parse_vox(std::span<const std::uint8_t> bytes) {
  HeaderReader r(bytes);
  if (r.token() != "VOX") throw FormatError("not a VOX-3D file (expected magic VOX)", 0);
  const int nx = r.positive_int();
  const int ny = r.positive_int();
  const int nz = r.positive_int();
  r.single_whitespace();
  const Extents e(nx, ny, nz);
  const std::size_t need = (e.size() + 7) / 8;
  const std::size_t start = r.offset();
  if (bytes.size() - start < need)
    throw FormatError("voxel data truncated: expected " + std::to_string(need) + " bytes",
                      bytes.size());
  BinaryGrid g(e);
  for (std::size_t i = 0; i < e.size(); ++i)
    if (bytes[start + i / 8] & (0x80u >> (i % 8))) g.set(i, true);
  return g;
}

void append(std::vector<std::uint8_t>& out, const std::string& s) {
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace

GridFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".pbm") return GridFormat::Pbm2D;
  if (ext == ".vox") return GridFormat::Vox3D;
  throw ParameterError("cannot infer grid format from extension '" + ext + "'");
}

BinaryGrid parse_grid(std::span<const std::uint8_t> bytes, GridFormat format) {
  return format == GridFormat::Pbm2D ? parse_pbm(bytes) : parse_vox(bytes);
}

std::vector<std::uint8_t> encode_grid(const BinaryGrid& grid, GridFormat format) {
  const Extents& e = grid.extents();
  std::vector<std::uint8_t> out;
  if (format == GridFormat::Pbm2D) {
    if (e.rank() != 2) throw ParameterError("PBM requires a 2D grid");
    append(out, "P4\n" + std::to_string(e.nx()) + " " + std::to_string(e.ny()) + "\n");
    const std::size_t row_bytes = (static_cast<std::size_t>(e.nx()) + 7) / 8;
    for (int y = 0; y < e.ny(); ++y) {
      std::vector<std::uint8_t> row(row_bytes, 0);
      for (int x = 0; x < e.nx(); ++x)
        if (grid.at(GridPoint(x, y))) row[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
      out.insert(out.end(), row.begin(), row.end());
    }
  } else {
    if (e.rank() != 3) throw ParameterError("VOX-3D requires a 3D grid");
    append(out, "VOX " + std::to_string(e.nx()) + " " + std::to_string(e.ny()) + " " +
                    std::to_string(e.nz()) + "\n");
    const std::size_t base = out.size();
    out.resize(base + (e.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (grid[i]) out[base + i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

BinaryGrid load_grid(const std::filesystem::path& path, GridFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  BinaryGrid g = parse_grid(bytes, format);
  if (g.count() == 0) throw DomainError("empty shape: '" + path.string() + "'");
  return ensure_background_border(g);
}

BinaryGrid load_grid(const std::filesystem::path& path) {
  return load_grid(path, format_from_path(path));
}

void save_grid(const BinaryGrid& grid, const std::filesystem::path& path, GridFormat format) {
  const auto bytes = encode_grid(grid, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void save_grid(const BinaryGrid& grid, const std::filesystem::path& path) {
  save_grid(grid, path, format_from_path(path));
}

}  // namespace cpma
