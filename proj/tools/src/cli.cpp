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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cpma/bench.hpp"
#include "cpma/cpma.hpp"
#include "cpma/meshio.hpp"
#include "cpma/metrics.hpp"
#include "cpma/skeleton.hpp"

namespace cpma::cli {
namespace {

namespace fs = std::filesystem;

// Flag problems detected after CLI11 parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) parts.push_back(cur);
  return parts;
}

double to_double(const std::string& s, const std::string& flag) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError(flag + ": '" + s + "' is not a number");
  return v;
}

int to_int(const std::string& s, const std::string& flag) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError(flag + ": '" + s + "' is not an integer");
  return v;
}

// "1..5", "1,3,5" or a mix such as "1..3,10".
std::vector<int> parse_levels(const std::string& spec) {
  std::vector<int> out;
  for (const auto& part : split(spec, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(part, "--levels"));
      continue;
    }
    const int a = to_int(part.substr(0, dots), "--levels");
    const int b = to_int(part.substr(dots + 2), "--levels");
    if (b < a) throw UsageError("--levels: empty range '" + part + "'");
    for (int k = a; k <= b; ++k) out.push_back(k);
  }
  if (out.empty()) throw UsageError("--levels: no levels given");
  for (int k : out)
    if (k < 0) throw UsageError("--levels: levels must be >= 0");
  return out;
}

// Comma list of reals; "a..b:step" expands to an inclusive range.
std::vector<double> parse_reals(const std::string& spec, const std::string& flag) {
  std::vector<double> out;
  for (const auto& part : split(spec, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_double(part, flag));
      continue;
    }
    const auto colon = part.find(':', dots);
    if (colon == std::string::npos) throw UsageError(flag + ": range '" + part + "' needs a :step");
    const double a = to_double(part.substr(0, dots), flag);
    const double b = to_double(part.substr(dots + 2, colon - dots - 2), flag);
    const double step = to_double(part.substr(colon + 1), flag);
    if (!(step > 0.0) || b < a) throw UsageError(flag + ": bad range '" + part + "'");
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * step);
  }
  if (out.empty()) throw UsageError(flag + ": no values given");
  return out;
}

// "30" is a planar angle (and an azimuth for 3D items); "az:el" sets both
// 3D angles.
std::vector<RotationSpec> parse_angles(const std::string& spec) {
  std::vector<RotationSpec> out;
  for (const auto& part : split(spec, ',')) {
    const auto colon = part.find(':');
    if (colon != std::string::npos && part.find("..") == std::string::npos) {
      const double az = to_double(part.substr(0, colon), "--angles");
      const double el = to_double(part.substr(colon + 1), "--angles");
      out.push_back({az, az, el});
      continue;
    }
    for (double a : parse_reals(part, "--angles")) out.push_back({a, a, 0.0});
  }
  return out;
}

bench::OutputFormat parse_format(const std::string& s) {
  const std::string f = lower(s);
  if (f == "csv") return bench::OutputFormat::Csv;
  if (f == "json") return bench::OutputFormat::Json;
  throw UsageError("--format must be csv or json");
}

BinaryGrid load_input(const fs::path& path, int resolution) {
  if (lower(path.extension().string()) == ".ply") return voxelize(parse_ply(path), resolution);
  return load_grid(path);
}

GridFormat output_format(const fs::path& path, int rank, const std::string& flag) {
  GridFormat f;
  try {
    f = format_from_path(path);
  } catch (const ParameterError&) {
    throw UsageError(flag + ": output must end in .pbm (2D) or .vox (3D)");
  }
  if ((f == GridFormat::Pbm2D) != (rank == 2))
    throw UsageError(flag + ": " + (rank == 2 ? "2D results need a .pbm path" : "3D results need a .vox path"));
  return f;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// MAT CSV: "# extents nx ny [nz]" then "x,y,z,radius" rows.
std::string mat_to_csv(const MedialAxisTransform& mat) {
  const Extents& e = mat.extents();
  std::string s = "# extents " + std::to_string(e.nx()) + ' ' + std::to_string(e.ny());
  if (e.rank() == 3) s += ' ' + std::to_string(e.nz());
  s += "\nx,y,z,radius\n";
  for (const auto& el : mat.elements())
    s += std::to_string(el.point.x()) + ',' + std::to_string(el.point.y()) + ',' +
         std::to_string(el.point.z()) + ',' + bench::format_value(el.radius) + '\n';
  return s;
}

MedialAxisTransform mat_from_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.rfind("# extents ", 0) != 0)
    throw ParseError("missing '# extents' header", line_no);
  std::vector<int> dims;
  for (const auto& tok : split(line.substr(10), ' ')) dims.push_back(std::stoi(tok));
  if (dims.size() != 2 && dims.size() != 3) throw ParseError("extents need 2 or 3 values", line_no);
  const Extents e = dims.size() == 2 ? Extents(dims[0], dims[1]) : Extents(dims[0], dims[1], dims[2]);
  ++line_no;
  if (!std::getline(in, line) || line != "x,y,z,radius") throw ParseError("missing column header", line_no);
  std::vector<MatElement> els;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 4) throw ParseError("expected 4 fields", line_no);
    try {
      const GridPoint p(std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2]));
      if (!e.contains(p)) throw ParseError("point outside extents", line_no);
      els.push_back({p, std::stod(f[3])});
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", line_no);
    }
  }
  return MedialAxisTransform(e, std::move(els));
}

std::string score_to_csv(const ScoreField& score, const BinaryGrid& grid) {
  std::string s = "x,y,z,score\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid[i]) continue;
    const GridPoint p = grid.extents().point(i);
    s += std::to_string(p.x()) + ',' + std::to_string(p.y()) + ',' + std::to_string(p.z()) + ',' +
         bench::format_value(score.values[i]) + '\n';
  }
  return s;
}

void print_summary(const std::vector<bench::BenchmarkRecord>& records, std::ostream& out) {
  for (const auto& r : records) {
    if (r.item != bench::kMeanItem) continue;
    out << r.method << (r.params.empty() ? "" : " " + r.params) << '\t' << r.perturbation << '\t'
        << bench::to_string(r.metric) << '\t' << bench::format_value(r.value) << '\n';
  }
}

// ---------------------------------------------------------------------------

struct SkeletonizeArgs {
  std::string input, method = "mat", output, score_output, mat_output;
  std::optional<double> gamma, theta, scale, tau;
  std::optional<int> max_freq;
  bool connect = false;
  int resolution = 150;
  int threads = 0;
};

bench::MethodSpec method_from_flags(const SkeletonizeArgs& a) {
  const std::string m = lower(a.method);
  auto require = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError("--method " + m + " requires " + flag);
    return *v;
  };
  auto forbid = [&](bool set, const char* flag) {
    if (set) throw UsageError(std::string(flag) + " does not apply to --method " + m);
  };
  if (m == "poisson" || m == "teasar") throw UsageError("method not implemented: " + m);
  const bool is_cpma = m == "cpma";
  forbid(!is_cpma && a.tau.has_value(), "--tau");
  forbid(!is_cpma && a.max_freq.has_value(), "--max-freq");
  forbid(!is_cpma && a.connect, "--connect");
  forbid(!is_cpma && !a.score_output.empty(), "--score-output");
  forbid(m != "gima" && a.gamma.has_value(), "--gamma");
  forbid(m != "bema" && a.theta.has_value(), "--theta");
  forbid(m != "sat" && m != "sfema" && a.scale.has_value(), "--scale");

  PrunerSpec p;
  if (m == "mat") p = PrunerSpec::mat();
  else if (m == "thinning") p = PrunerSpec::thinning();
  else if (m == "gima") p = PrunerSpec::gima(require(a.gamma, "--gamma"));
  else if (m == "bema") p = PrunerSpec::bema(require(a.theta, "--theta"));
  else if (m == "sat") p = PrunerSpec::sat(require(a.scale, "--scale"));
  else if (m == "sfema") p = PrunerSpec::sfema(require(a.scale, "--scale"));
  else if (is_cpma) {
    CpmaConfig c;
    if (a.tau) c.tau = *a.tau;
    if (a.max_freq) c.max_freq = *a.max_freq;
    c.threads = a.threads;
    if (!(c.tau > 0.0 && c.tau < 1.0)) throw UsageError("--tau must lie in (0, 1)");
    if (a.max_freq && *a.max_freq < 1) throw UsageError("--max-freq must be >= 1");
    return a.connect ? bench::MethodSpec::connected_cpma(c) : bench::MethodSpec::cpma_method(c);
  } else {
    throw UsageError("unknown --method '" + a.method + "'");
  }
  try {
    p.validate();
  } catch (const ParameterError& ex) {
    throw UsageError(ex.what());
  }
  return bench::MethodSpec::of(p);
}

int cmd_skeletonize(const SkeletonizeArgs& a, std::ostream& out, std::ostream& err) {
  const bench::MethodSpec method = method_from_flags(a);
  const BinaryGrid grid = load_input(a.input, a.resolution);
  const GridFormat fmt = output_format(a.output, grid.rank(), "--output");
  if (method.kind != bench::MethodSpec::Kind::Pruner) {
    try {
      method.cpma.validate(grid.extents());
    } catch (const ParameterError& ex) {
      throw UsageError(ex.what());
    }
  }

  MedialAxisTransform axis;
  if (method.kind == bench::MethodSpec::Kind::Pruner) {
    axis = bench::skeletonize(grid, method);
  } else {
    auto res = extract_cpma(grid, method.cpma);
    axis = std::move(res.axis);
    if (method.kind == bench::MethodSpec::Kind::ConnectedCpma) {
      auto c = connect_cpma(axis, res.score, grid, method.cpma);
      if (c.cap_reached) err << "warning: connection iteration cap reached\n";
      axis = std::move(c.axis);
    }
    if (!a.score_output.empty()) write_text(a.score_output, score_to_csv(res.score, grid));
  }
  save_grid(axis.indicator(), a.output, fmt);
  if (!a.mat_output.empty()) write_text(a.mat_output, mat_to_csv(axis));
  out << "points\t" << axis.size() << '\n';
  return kOk;
}

int cmd_reconstruct(const std::string& mat_path, const std::string& output,
                    const std::string& reference, std::ostream& out) {
  const MedialAxisTransform mat = mat_from_csv(mat_path);
  const GridFormat fmt = output_format(output, mat.extents().rank(), "--output");
  const BinaryGrid rec = reconstruct(mat, mat.extents());
  save_grid(rec, output, fmt);
  out << "foreground\t" << rec.count() << '\n';
  if (!reference.empty()) out << "jaccard\t" << bench::format_value(jaccard(rec, load_grid(reference))) << '\n';
  return kOk;
}

int cmd_metrics(const std::string& a_path, const std::string& b_path, std::ostream& out) {
  const BinaryGrid a = load_grid(a_path);
  const BinaryGrid b = load_grid(b_path);
  if (a.rank() != b.rank()) throw UsageError("inputs differ in dimensionality");
  const auto pa = foreground_points(a);
  const auto pb = foreground_points(b);
  out << "metric,value\n";
  out << "hausdorff," << bench::format_value(hausdorff(pa, pb)) << '\n';
  out << "dubuisson_jain," << bench::format_value(dubuisson_jain(pa, pb)) << '\n';
  if (a.extents() == b.extents()) out << "jaccard," << bench::format_value(jaccard(a, b)) << '\n';
  return kOk;
}

struct BenchArgs {
  std::string dataset, methods = "cpma,mat", levels, angles, taus, scales = "1", out, format = "csv";
  std::uint64_t seed = 0;
  int jobs = 0;
  int resolution = 64;
};

std::vector<bench::MethodSpec> parse_methods(const std::string& list) {
  std::vector<bench::MethodSpec> out;
  for (const auto& tok : split(list, ',')) {
    bench::MethodSpec m;
    try {
      m = bench::MethodSpec::parse(tok);
    } catch (const ParameterError& ex) {
      throw UsageError(std::string("--methods: ") + ex.what());
    }
    if (!m.implemented()) throw UsageError("method not implemented: " + lower(tok));
    out.push_back(m);
  }
  if (out.empty()) throw UsageError("--methods: no methods given");
  return out;
}

int finish_bench(std::vector<bench::BenchmarkRecord> records, const BenchArgs& a,
                 bench::OutputFormat fmt, const std::atomic<bool>* stop, std::ostream& out,
                 std::ostream& err) {
  bench::emit_results(records, a.out, fmt);
  if (stop && stop->load()) {
    err << "interrupted: partial results written to " << a.out << '\n';
    return kRuntimeError;
  }
  print_summary(records, out);
  return kOk;
}

int cmd_bench(const std::string& which, const BenchArgs& a, const std::atomic<bool>* stop,
              std::ostream& out, std::ostream& err) {
  const bench::OutputFormat fmt = parse_format(a.format);
  if (a.jobs < 0) throw UsageError("--jobs must be >= 0");
  if (a.resolution < 8) throw UsageError("--resolution must be >= 8");
  if (!fs::is_directory(a.dataset)) throw UsageError("--dataset: '" + a.dataset + "' is not a directory");
  bench::RunOptions opts;
  opts.jobs = a.jobs;
  opts.resolution = a.resolution;
  opts.stop = stop;
  opts.log = &err;

  if (which == "noise-bench") {
    const auto methods = parse_methods(a.methods);
    const auto levels = parse_levels(a.levels.empty() ? "1..20" : a.levels);
    return finish_bench(bench::run_noise_experiment(a.dataset, methods, levels, a.seed, opts), a,
                        fmt, stop, out, err);
  }
  if (which == "rotation-bench") {
    const auto methods = parse_methods(a.methods);
    const auto angles = parse_angles(a.angles.empty() ? "3..90:3" : a.angles);
    return finish_bench(bench::run_rotation_experiment(a.dataset, methods, angles, a.seed, opts), a,
                        fmt, stop, out, err);
  }
  const auto taus = parse_reals(a.taus.empty() ? "0.1..0.9:0.1" : a.taus, "--taus");
  for (double t : taus)
    if (!(t > 0.0 && t < 1.0)) throw UsageError("--taus: values must lie in (0, 1)");
  const auto scales = parse_reals(a.scales, "--scales");
  for (double s : scales)
    if (!(s > 0.0)) throw UsageError("--scales: values must be > 0");
  return finish_bench(bench::run_tau_sweep(a.dataset, taus, scales, a.seed, opts), a, fmt, stop,
                      out, err);
}

int cmd_voxelize(const std::string& input, const std::string& output, int resolution,
                 std::ostream& out) {
  if (resolution < 8) throw UsageError("--resolution must be >= 8");
  const GridFormat fmt = output_format(output, 3, "--output");
  const BinaryGrid g = voxelize(parse_ply(input), resolution);
  save_grid(g, output, fmt);
  out << "foreground\t" << g.count() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::atomic<bool>* stop) {
  CLI::App app{"Medial axis extraction and pruning benchmarks", "cpma"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  SkeletonizeArgs sk;
  auto* skel = app.add_subcommand("skeletonize", "Extract a (pruned) medial axis from a shape");
  skel->add_option("input", sk.input, "Input .pbm, .vox or .ply")->required()->check(CLI::ExistingFile);
  skel->add_option("--method", sk.method,
                   "mat, thinning, gima, bema, sat, sfema, cpma (poisson, teasar: not implemented)")
      ->capture_default_str();
  skel->add_option("--gamma", sk.gamma, "GIMA projection distance (pixels)");
  skel->add_option("--theta", sk.theta, "BEMA bisector angle (degrees)");
  skel->add_option("--scale", sk.scale, "SAT/SFEMA ball scale");
  skel->add_option("--tau", sk.tau, "CPMA score threshold (default 0.47)");
  skel->add_option("--max-freq", sk.max_freq, "CPMA frequency cap (default ceil(M/2))");
  skel->add_flag("--connect", sk.connect, "Enforce connectivity (C-CPMA)");
  skel->add_option("--output", sk.output, "Skeleton grid (.pbm or .vox)")->required();
  skel->add_option("--score-output", sk.score_output, "Score field CSV (cpma only)");
  skel->add_option("--mat-output", sk.mat_output, "Medial axis CSV with radii");
  skel->add_option("--resolution", sk.resolution, "Voxels per axis for .ply input")->capture_default_str();
  skel->add_option("--threads", sk.threads, "Score function workers (0 = all cores)")->capture_default_str();

  std::string rec_mat, rec_out, rec_ref;
  auto* recon = app.add_subcommand("reconstruct", "Rebuild a shape from a medial axis CSV");
  recon->add_option("mat", rec_mat, "Medial axis CSV from skeletonize --mat-output")->required()->check(CLI::ExistingFile);
  recon->add_option("--output", rec_out, "Reconstructed grid (.pbm or .vox)")->required();
  recon->add_option("--reference", rec_ref, "Original grid; prints the Jaccard index")->check(CLI::ExistingFile);

  std::string met_a, met_b;
  auto* metrics = app.add_subcommand("metrics", "Hausdorff, Dubuisson-Jain and Jaccard between two grids");
  metrics->add_option("first", met_a, "First grid")->required()->check(CLI::ExistingFile);
  metrics->add_option("second", met_b, "Second grid")->required()->check(CLI::ExistingFile);

  BenchArgs ba;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--dataset", ba.dataset, "Directory of .pbm/.vox/.ply shapes")->required();
    c->add_option("--seed", ba.seed, "RNG seed")->capture_default_str();
    c->add_option("--out", ba.out, "Result file")->required();
    c->add_option("--format", ba.format, "csv or json")->capture_default_str();
    c->add_option("--jobs", ba.jobs, "Worker threads (0 = available parallelism)")->capture_default_str();
    c->add_option("--resolution", ba.resolution, "Voxels per axis for .ply items")->capture_default_str();
  };
  auto* noise = app.add_subcommand("noise-bench", "Skeleton stability under boundary noise");
  add_common(noise);
  noise->add_option("--methods", ba.methods, "Comma list, e.g. cpma,mat,gima:5")->capture_default_str();
  noise->add_option("--levels", ba.levels, "Noise levels, e.g. 1..20 or 5,10 (default 1..20)");
  auto* rot = app.add_subcommand("rotation-bench", "Skeleton equivariance under rotation");
  add_common(rot);
  rot->add_option("--methods", ba.methods, "Comma list, e.g. cpma,mat")->capture_default_str();
  rot->add_option("--angles", ba.angles, "Degrees, e.g. 0,30 or 3..90:3; az:el for 3D (default 3..90:3)");
  auto* tau = app.add_subcommand("tau-sweep", "Reconstruction quality against the CPMA threshold");
  add_common(tau);
  tau->add_option("--taus", ba.taus, "Thresholds (default 0.1..0.9:0.1)");
  tau->add_option("--scales", ba.scales, "Shape scale factors")->capture_default_str();

  std::string vox_in, vox_out;
  int vox_res = 150;
  auto* vox = app.add_subcommand("voxelize", "Voxelize a closed ASCII PLY mesh");
  vox->add_option("input", vox_in, "Input .ply")->required()->check(CLI::ExistingFile);
  vox->add_option("--output", vox_out, "Output .vox")->required();
  vox->add_option("--resolution", vox_res, "Voxels along the longest axis")->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsageError;
  }

  try {
    if (*skel) return cmd_skeletonize(sk, out, err);
    if (*recon) return cmd_reconstruct(rec_mat, rec_out, rec_ref, out);
    if (*metrics) return cmd_metrics(met_a, met_b, out);
    if (*noise) return cmd_bench("noise-bench", ba, stop, out, err);
    if (*rot) return cmd_bench("rotation-bench", ba, stop, out, err);
    if (*tau) return cmd_bench("tau-sweep", ba, stop, out, err);
    if (*vox) return cmd_voxelize(vox_in, vox_out, vox_res, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsageError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace cpma::cli
