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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "cpma/bench.hpp"
#include "cpma/cpma.hpp"
#include "cpma/meshio.hpp"
#include "cpma/metrics.hpp"
#include "cpma/skeleton.hpp"
#include "cpma/transform.hpp"
#include "oracles.hpp"

using namespace cpma;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<fs::path> fixtures(const std::string& sub) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(oracle::fixture(sub))) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> all_grid_fixtures() {
  auto a = fixtures("shapes2d");
  for (const auto& p : fixtures("shapes3d")) a.push_back(p);
  for (const auto& p : fixtures("special")) a.push_back(p);
  return a;
}

// Mean of the per-item records of one metric, grouped by (method, perturbation).
std::map<std::pair<std::string, std::string>, double> means(const std::vector<bench::BenchmarkRecord>& r,
                                                            bench::Metric metric) {
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& x : r)
    if (x.item == bench::kMeanItem && x.metric == metric) out[{x.method, x.perturbation}] = x.value;
  return out;
}

bench::RunOptions quiet_options() {
  static std::ostringstream sink;
  bench::RunOptions o;
  o.log = &sink;
  return o;
}

Verdict reconstruction_completeness() {
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0, n = 0;
  for (const auto& p : all_grid_fixtures()) {
    const BinaryGrid g = load_grid(p);
    ++n;
    if (!(reconstruct(extract_mat(g), g.extents()) == g)) ++bad;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 60.0, std::to_string(n - bad) + "/" + std::to_string(n) + " exact, " + fmt(t) + " s"};
}

Verdict edt_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2);
  int bad = 0;
  for (int k = 0; k < 200; ++k) {
    const Extents e = k % 4 == 3 ? Extents(4 + int(rng.below(13)), 4 + int(rng.below(13)), 4 + int(rng.below(13)))
                                 : Extents(4 + int(rng.below(29)), 4 + int(rng.below(29)));
    const BinaryGrid g = oracle::random_grid(rng, e, 0.2 + 0.75 * rng.uniform());
    if (edt(g).sq != oracle::squared_edt(g)) ++bad;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 30.0, std::to_string(200 - bad) + "/200 grids exact, " + fmt(t) + " s"};
}

Verdict dct_round_trip() {
  double worst = 0.0;
  for (const auto& p : all_grid_fixtures()) {
    const BinaryGrid g = load_grid(p);
    const auto back = idct_full(dct_forward(g));
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(back[i] - (g[i] ? 1.0 : 0.0)));
  }
  const SpectralField c = dct_forward(BinaryGrid(Extents(16, 12), true));
  double ac = 0.0;
  for (std::size_t i = 1; i < c.coeffs.size(); ++i) ac = std::max(ac, std::abs(c.coeffs[i]));
  return {worst <= 1e-9 && ac < 1e-12, "max round-trip error " + fmt(worst, 3) + ", max AC of constant " + fmt(ac, 3)};
}

Verdict exact_equivariance() {
  CpmaConfig cfg;
  std::vector<BinaryGrid> shapes;
  for (const char* f : {"shapes2d/horse.pbm", "shapes2d/star.pbm", "shapes2d/lshape.pbm", "shapes3d/blob.vox",
                        "shapes3d/box.vox", "shapes3d/cylinder.vox"})
    shapes.push_back(load_grid(oracle::fixture(f)));
  int checks = 0, bad = 0;
  double worst = 0.0;
  for (const auto& g : shapes) {
    const CpmaResult base = extract_cpma(g, cfg);
    for (const auto& s : LatticeSymmetry::all(g.rank())) {
      const CpmaResult r = extract_cpma(s.apply(g), cfg);
      const ScoreField expect = s.apply(base.score);
      for (std::size_t i = 0; i < expect.values.size(); ++i)
        worst = std::max(worst, std::abs(expect.values[i] - r.score.values[i]));
      ++checks;
      if (!(r.axis.points() == s.apply(base.axis).points())) ++bad;
    }
  }
  return {bad == 0 && worst <= 1e-9, std::to_string(checks - bad) + "/" + std::to_string(checks) +
                                         " point sets equal, max score difference " + fmt(worst, 3)};
}

Verdict rotation_equivariance() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<RotationSpec> angles;
  for (int a = 3; a <= 90; a += 3) angles.push_back(RotationSpec::planar(a));
  const auto r = bench::run_rotation_experiment(oracle::fixture("shapes2d"), {bench::MethodSpec::parse("cpma")},
                                                angles, 0, quiet_options());
  double sum = 0.0;
  int n = 0;
  for (const auto& [key, v] : means(r, bench::Metric::DubuissonJain)) sum += v, ++n;
  const double mean = sum / n;
  const double t = seconds_since(t0);
  return {n == 30 && mean <= 2.0 && t < 600.0,
          "mean d_D " + fmt(mean) + " px over " + std::to_string(n) + " angles, " + fmt(t) + " s"};
}

Verdict noise_robustness() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<bench::MethodSpec> methods{bench::MethodSpec::parse("cpma"), bench::MethodSpec::parse("mat"),
                                               bench::MethodSpec::parse("thinning")};
  std::map<std::string, double> avg;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = bench::run_noise_experiment(oracle::fixture("shapes2d"), methods, {10}, seed, quiet_options());
    for (const auto& [key, v] : means(r, bench::Metric::DubuissonJain)) avg[key.first] += v / 5.0;
  }
  const double t = seconds_since(t0);
  const bool ok = avg["CPMA"] < avg["MAT"] && avg["CPMA"] < avg["Thinning"] && t < 600.0;
  return {ok, "d_D CPMA " + fmt(avg["CPMA"]) + ", MAT " + fmt(avg["MAT"]) + ", Thinning " + fmt(avg["Thinning"]) +
                  ", " + fmt(t) + " s"};
}

Verdict branch_suppression() {
  const BinaryGrid g = load_grid(oracle::fixture("special/bump_rectangle.pbm"));
  const CpmaConfig cfg;
  const CpmaResult res = extract_cpma(g, cfg);
  const auto mat_ends = oracle::endpoints(extract_mat(g).indicator());
  const auto cpma_ends = oracle::endpoints(res.axis.indicator());
  const ConnectResult c = connect_cpma(res.axis, res.score, g, cfg);
  const auto parts = oracle::components(c.axis.indicator());
  return {cpma_ends < mat_ends && parts == 1, "endpoints CPMA " + std::to_string(cpma_ends) + " vs MAT " +
                                                  std::to_string(mat_ends) + ", C-CPMA components " +
                                                  std::to_string(parts)};
}

Verdict connectivity_contract() {
  Rng rng(2718);
  int good = 0, caps = 0;
  for (int k = 0; k < 20; ++k) {
    const BinaryGrid g = k < 16 ? oracle::random_blob(rng, Extents(96, 96), 3 + int(rng.below(6)))
                                : oracle::random_blob(rng, Extents(28, 28, 28), 3 + int(rng.below(3)));
    const CpmaConfig cfg;
    const CpmaResult res = extract_cpma(g, cfg);
    const ConnectResult c = connect_cpma(res.axis, res.score, g, cfg);
    caps += c.cap_reached ? 1 : 0;
    bool ok = !c.cap_reached && oracle::components(c.axis.indicator()) == 1;
    for (const auto& el : c.axis.elements()) ok = ok && g.at(el.point);
    for (const auto& el : res.axis.elements()) ok = ok && c.axis.contains(el.point);
    ok = ok && connect_cpma(c.axis, res.score, g, cfg).axis == c.axis;
    good += ok ? 1 : 0;
  }
  return {good == 20, std::to_string(good) + "/20 blobs connected, idempotent and inside; cap reached " +
                          std::to_string(caps) + " times"};
}

Verdict tau_sweep() {
  std::vector<double> taus;
  for (int k = 1; k <= 9; ++k) taus.push_back(k / 10.0);
  taus.push_back(0.47);
  std::sort(taus.begin(), taus.end());
  const auto r = bench::run_tau_sweep(oracle::fixture("shapes2d"), taus, {1.0}, 0, quiet_options());
  std::map<double, double> jac;
  std::map<std::string, std::map<double, double>> size;
  for (const auto& x : r) {
    const double tau = std::stod(x.params.substr(x.params.find('=') + 1));
    if (x.item == bench::kMeanItem && x.metric == bench::Metric::Jaccard) jac[tau] = x.value;
    if (x.item.front() != '@' && x.metric == bench::Metric::SkeletonSize) size[x.item][tau] = x.value;
  }
  bool monotone = true;
  for (auto it = std::next(jac.begin()); it != jac.end(); ++it)
    monotone = monotone && it->second <= std::prev(it)->second + 1e-12;
  const double keep = jac[0.47] / jac[0.1];
  int halved = 0;
  std::string counts;
  for (const auto& [item, s] : size) {
    halved += s.at(0.47) <= 0.5 * s.at(0.1) ? 1 : 0;
    counts += " " + item + " " + fmt(s.at(0.1)) + "->" + fmt(s.at(0.47));
  }
  const bool ok = monotone && keep >= 0.9 && 2 * halved >= static_cast<int>(size.size());
  return {ok, std::string(monotone ? "non-increasing" : "NOT monotone") + ", J(0.47)/J(0.1) " + fmt(keep) +
                  ", halved on " + std::to_string(halved) + "/" + std::to_string(size.size()) + " (" +
                  counts.substr(1) + ")"};
}

Verdict metric_oracles() {
  Rng rng(314);
  int bad = 0;
  for (int k = 0; k < 500; ++k) {
    const int rank = k % 5 == 0 ? 3 : 2;
    auto make = [&] {
      PointSet p;
      const int n = 1 + int(rng.below(64));
      for (int i = 0; i < n; ++i)
        p.emplace_back(int(rng.below(80)) - 20, int(rng.below(80)), rank == 3 ? int(rng.below(40)) : 0);
      return p;
    };
    const PointSet a = make(), b = make();
    const double h = hausdorff(a, b), d = dubuisson_jain(a, b);
    if (std::abs(h - oracle::hausdorff(a, b)) > 1e-9 || std::abs(d - oracle::dubuisson_jain(a, b)) > 1e-9 || d > h)
      ++bad;
  }
  return {bad == 0, std::to_string(500 - bad) + "/500 pairs agree with brute force and satisfy d_D <= d_H"};
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "cpma_acceptance";
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string data = oracle::fixture("shapes2d");
  bool same = true;
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"noise-bench", "--methods", "cpma,mat,thinning", "--levels", "1..4"},
           {"rotation-bench", "--methods", "cpma,mat", "--angles", "15,30,45"}}) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (cmd[0] + std::to_string(run) + ".csv");
      std::vector<std::string> args{"cpma"};
      args.insert(args.end(), cmd.begin(), cmd.end());
      for (const std::string s : {"--dataset", data.c_str(), "--seed", "7", "--out"}) args.push_back(s);
      args.push_back(out.string());
      std::ostringstream o, e;
      if (cli::run(args, o, e) != 0) return {false, cmd[0] + " failed: " + e.str()};
      const std::string text = slurp(out);
      if (run == 0) first = text;
      else same = same && text == first && !text.empty();
    }
  }
  return {same, same ? "noise-bench and rotation-bench CSVs byte-identical across runs" : "outputs differ"};
}

Verdict ply_path() {
  const TriangleMesh cube = parse_ply(oracle::fixture("mesh/cube.ply"));
  const TriangleMesh sphere = parse_ply(oracle::fixture("mesh/icosphere.ply"));
  double radius = 0.0;
  std::array<double, 3> lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
  for (const auto& v : sphere.vertices) {
    radius = std::max(radius, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
    for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], v[k]), hi[k] = std::max(hi[k], v[k]);
  }
  const double longest = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  const double r_vox = radius * 62.0 / longest;
  const double expected = 4.0 / 3.0 * std::numbers::pi * r_vox * r_vox * r_vox;
  const double got = static_cast<double>(voxelize(sphere, 64).count());
  const double err = std::abs(got / expected - 1.0);
  const bool ok = cube.vertices.size() == 8 && cube.faces.size() == 12 && err <= 0.05;
  return {ok, "cube " + std::to_string(cube.vertices.size()) + "/" + std::to_string(cube.faces.size()) +
                  ", sphere volume " + fmt(got, 6) + " vs " + fmt(expected, 6) + " (" + fmt(100 * err, 3) + "%)"};
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria{
      reconstruction_completeness, edt_oracle,          dct_round_trip, exact_equivariance,
      rotation_equivariance,       noise_robustness,    branch_suppression, connectivity_contract,
      tau_sweep,                   metric_oracles,      determinism,    ply_path};
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    try {
      v = criteria[k]();
    } catch (const std::exception& ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << "criterion " << k + 1 << ": " << (v.pass ? "PASS" : "FAIL") << " (" << v.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
