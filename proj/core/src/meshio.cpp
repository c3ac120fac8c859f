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

#include "cpma/meshio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace cpma {

namespace {

struct Property {
  std::string name;
  bool is_list = false;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> props;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

double to_double(std::string_view tok, std::size_t line) {
  const std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError("invalid number '" + s + "'", line);
  return v;
}

long long to_integer(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("invalid integer '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace

TriangleMesh parse_ply_text(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line) || split(line) != std::vector<std::string_view>{"ply"})
    throw ParseError("missing 'ply' magic", reader.line_no());

  std::vector<Element> elements;
  bool have_format = false;
  while (true) {
    if (!reader.next(line)) throw ParseError("header not terminated by end_header", reader.line_no());
    const auto tok = split(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "format") {
      if (tok.size() < 2) throw ParseError("malformed format line", reader.line_no());
      if (tok[1] != "ascii")
        throw UnsupportedFormatError("unsupported PLY format '" + std::string(tok[1]) +
                                     "': only ascii is supported");
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError("malformed element line", reader.line_no());
      const long long n = to_integer(tok[2], reader.line_no());
      if (n < 0) throw ParseError("negative element count", reader.line_no());
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(n), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw ParseError("property before any element", reader.line_no());
      if (tok.size() >= 5 && tok[1] == "list")
        elements.back().props.push_back({std::string(tok[4]), true});
      else if (tok.size() == 3)
        elements.back().props.push_back({std::string(tok[2]), false});
      else
        throw ParseError("malformed property line", reader.line_no());
    } else {
      throw ParseError("unknown header keyword '" + std::string(tok[0]) + "'", reader.line_no());
    }
  }
  if (!have_format) throw ParseError("missing format line", reader.line_no());

  TriangleMesh mesh;
  const Element* vertex_el = nullptr;
  for (const auto& el : elements) {
    if (el.name == "vertex") vertex_el = &el;
  }
  if (!vertex_el) throw ParseError("no vertex element declared", reader.line_no());
  std::array<int, 3> xyz{-1, -1, -1};
  for (std::size_t k = 0; k < vertex_el->props.size(); ++k) {
    const auto& p = vertex_el->props[k];
    if (p.is_list) throw UnsupportedFormatError("list properties on vertices are not supported");
    if (p.name == "x") xyz[0] = static_cast<int>(k);
    if (p.name == "y") xyz[1] = static_cast<int>(k);
    if (p.name == "z") xyz[2] = static_cast<int>(k);
  }
  if (xyz[0] < 0 || xyz[1] < 0 || xyz[2] < 0)
    throw ParseError("vertex element lacks x/y/z properties", reader.line_no());

  std::vector<std::pair<std::array<long long, 3>, std::size_t>> raw_faces;
  for (const auto& el : elements) {
    for (std::size_t row = 0; row < el.count; ++row) {
      if (!reader.next(line))
        throw ParseError("element '" + el.name + "' count mismatch: declared " +
                             std::to_string(el.count) + ", file ends after " +
                             std::to_string(row),
                         reader.line_no());
      const auto tok = split(line);
      const std::size_t ln = reader.line_no();
      std::size_t t = 0;
      auto need = [&](std::size_t n) {
        if (t + n > tok.size())
          throw ParseError("element '" + el.name + "' count mismatch: line has too few values",
                           ln);
      };
      std::array<double, 3> v{};
      for (std::size_t k = 0; k < el.props.size(); ++k) {
        const auto& p = el.props[k];
        if (!p.is_list) {
          need(1);
          if (&el == vertex_el)
            for (int a = 0; a < 3; ++a)
              if (xyz[a] == static_cast<int>(k)) v[a] = to_double(tok[t], ln);
          ++t;
          continue;
        }
        need(1);
        const long long len = to_integer(tok[t++], ln);
        if (len < 0) throw ParseError("negative list length", ln);
        need(static_cast<std::size_t>(len));
        const bool is_face_indices =
            el.name == "face" && (p.name == "vertex_indices" || p.name == "vertex_index");
        if (is_face_indices) {
          if (len != 3)
            throw UnsupportedFormatError("face with " + std::to_string(len) +
                                         " vertices on line " + std::to_string(ln) +
                                         ": only triangles are supported");
          std::array<long long, 3> f{};
          for (int a = 0; a < 3; ++a) f[a] = to_integer(tok[t + a], ln);
          raw_faces.push_back({f, ln});
        }
        t += static_cast<std::size_t>(len);
      }
      if (t != tok.size())
        throw ParseError("element '" + el.name + "' count mismatch: expected " +
                             std::to_string(t) + " values, found " + std::to_string(tok.size()),
                         ln);
      if (&el == vertex_el) {
        for (double c : v)
          if (!std::isfinite(c)) throw ParseError("non-finite vertex coordinate", ln);
        mesh.vertices.push_back(v);
      }
    }
  }

  for (const auto& [f, ln] : raw_faces) {
    std::array<std::uint32_t, 3> face{};
    for (int a = 0; a < 3; ++a) {
      if (f[a] < 0 || static_cast<std::size_t>(f[a]) >= mesh.vertices.size())
        throw ParseError("vertex index " + std::to_string(f[a]) + " out of range", ln);
      face[a] = static_cast<std::uint32_t>(f[a]);
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
      throw ParseError("degenerate face", ln);
    mesh.faces.push_back(face);
  }
  return mesh;
}

TriangleMesh parse_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ply_text(ss.str());
}

void write_ply(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "ply\nformat ascii 1.0\nelement vertex " << mesh.vertices.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nelement face "
      << mesh.faces.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
  out.precision(9);
  for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

BinaryGrid voxelize(const TriangleMesh& mesh, int resolution) {
  if (resolution < 8) throw ParameterError("voxelization resolution must be >= 8");
  if (mesh.faces.empty()) throw VoxelizationError("mesh has no faces");

  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& v : mesh.vertices)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  const double longest = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  if (!(longest > 0.0)) throw VoxelizationError("mesh has zero extent");
  const double scale = (resolution - 2) / longest;  // voxels per unit
  std::array<int, 3> n{};
  for (int k = 0; k < 3; ++k)
    n[k] = std::max(3, static_cast<int>(std::ceil((hi[k] - lo[k]) * scale - 1e-9)) + 2);
  const Extents e(n[0], n[1], n[2]);

  // Voxel i along axis k has its centre at lo + (i - 0.5) / scale.
  auto to_voxel = [&](double w, int k) { return (w - lo[k]) * scale + 0.5; };

  struct Tri {
    double y[3], z[3], x[3];
  };
  std::vector<Tri> tris;
  tris.reserve(mesh.faces.size());
  std::vector<std::vector<std::uint32_t>> by_row(static_cast<std::size_t>(e.nz()));
  for (const auto& f : mesh.faces) {
    Tri t{};
    for (int a = 0; a < 3; ++a) {
      const auto& v = mesh.vertices[f[a]];
      t.x[a] = to_voxel(v[0], 0);
      t.y[a] = to_voxel(v[1], 1);
      t.z[a] = to_voxel(v[2], 2);
    }
    const double zmin = std::min({t.z[0], t.z[1], t.z[2]});
    const double zmax = std::max({t.z[0], t.z[1], t.z[2]});
    const int z0 = std::max(0, static_cast<int>(std::floor(zmin)) - 1);
    const int z1 = std::min(e.nz() - 1, static_cast<int>(std::ceil(zmax)) + 1);
    for (int z = z0; z <= z1; ++z) by_row[static_cast<std::size_t>(z)].push_back(
        static_cast<std::uint32_t>(tris.size()));
    tris.push_back(t);
  }

  // Fixed irrational offsets keep rays off edges and vertices of meshes
  // whose vertices sit on voxel-centre lattice lines.
  constexpr double kJitterY = 1.3819660112501051e-6;
  constexpr double kJitterZ = 2.3606797749978969e-6;

  BinaryGrid g(e);
  std::vector<double> hits;
  for (int z = 0; z < e.nz(); ++z) {
    for (int y = 0; y < e.ny(); ++y) {
      const double py = y + kJitterY, pz = z + kJitterZ;
      hits.clear();
      for (const auto ti : by_row[static_cast<std::size_t>(z)]) {
        const Tri& t = tris[ti];
        const double d = (t.y[1] - t.y[0]) * (t.z[2] - t.z[0]) - (t.y[2] - t.y[0]) * (t.z[1] - t.z[0]);
        if (d == 0.0) continue;  // edge-on to the ray
        const double w1 = ((py - t.y[0]) * (t.z[2] - t.z[0]) - (t.y[2] - t.y[0]) * (pz - t.z[0])) / d;
        const double w2 = ((t.y[1] - t.y[0]) * (pz - t.z[0]) - (py - t.y[0]) * (t.z[1] - t.z[0])) / d;
        const double w0 = 1.0 - w1 - w2;
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
        hits.push_back(w0 * t.x[0] + w1 * t.x[1] + w2 * t.x[2]);
      }
      if (hits.size() % 2 != 0)
        throw VoxelizationError("ray parity inconsistency at row y=" + std::to_string(y) +
                                " z=" + std::to_string(z) + ": mesh is not watertight");
      std::sort(hits.begin(), hits.end());
      std::size_t h = 0;
      for (int x = 0; x < e.nx(); ++x) {
        while (h < hits.size() && hits[h] < x) ++h;
        if (h % 2 == 1) g.set(GridPoint(x, y, z), true);
      }
    }
  }
  return keep_largest_component(g);
}

}  // namespace cpma
