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

#include "cpma/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "cpma/meshio.hpp"
#include "cpma/metrics.hpp"
#include "cpma/random.hpp"

namespace cpma::bench {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Hausdorff: return "hausdorff";
    case Metric::DubuissonJain: return "dubuisson_jain";
    case Metric::Jaccard: return "jaccard";
    case Metric::SkeletonSize: return "skeleton_size";
  }
  return "?";
}

Metric metric_from_string(std::string_view s) {
  for (const Metric m : {Metric::Hausdorff, Metric::DubuissonJain, Metric::Jaccard,
                         Metric::SkeletonSize})
    if (to_string(m) == s) return m;
  throw ParameterError("unknown metric '" + std::string(s) + "'");
}

std::string format_value(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("cannot format value");
  return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// Methods

namespace {

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParameterError("invalid " + std::string(what) + " value '" + std::string(s) + "'");
  return v;
}

}  // namespace

MethodSpec MethodSpec::parse(std::string_view token) {
  std::string name(token.substr(0, token.find(':')));
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const bool has_arg = token.find(':') != std::string_view::npos;
  const std::string_view arg = has_arg ? token.substr(token.find(':') + 1) : std::string_view{};
  auto required = [&](std::string_view what) {
    if (!has_arg)
      throw ParameterError("method '" + name + "' needs a parameter (" + std::string(what) + ")");
    return parse_number(arg, what);
  };
  auto none = [&] {
    if (has_arg) throw ParameterError("method '" + name + "' takes no parameter");
  };

  MethodSpec m;
  if (name == "mat") {
    none();
    m = of(PrunerSpec::mat());
  } else if (name == "thinning") {
    none();
    m = of(PrunerSpec::thinning());
  } else if (name == "gima") {
    m = of(PrunerSpec::gima(required("gamma")));
  } else if (name == "bema") {
    m = of(PrunerSpec::bema(required("theta")));
  } else if (name == "sat") {
    m = of(PrunerSpec::sat(required("scale")));
  } else if (name == "sfema") {
    m = of(PrunerSpec::sfema(required("scale")));
  } else if (name == "poisson") {
    m = of(PrunerSpec{PruningMethod::PoissonSkel});
  } else if (name == "teasar") {
    m = of(PrunerSpec{PruningMethod::TEASAR});
  } else if (name == "cpma" || name == "ccpma" || name == "c-cpma") {
    CpmaConfig c;
    if (has_arg) c.tau = parse_number(arg, "tau");
    if (!(c.tau > 0.0 && c.tau < 1.0)) throw ParameterError("tau must lie in (0, 1)");
    m = name == "cpma" ? cpma_method(c) : connected_cpma(c);
  } else {
    throw ParameterError("unknown method '" + std::string(token) + "'");
  }
  if (m.kind == Kind::Pruner) m.pruner.validate();
  return m;
}

std::string MethodSpec::name() const {
  switch (kind) {
    case Kind::Pruner: return std::string(cpma::to_string(pruner.method));
    case Kind::Cpma: return "CPMA";
    case Kind::ConnectedCpma: return "C-CPMA";
  }
  return "?";
}

std::string MethodSpec::params() const {
  if (kind == Kind::Pruner) return pruner.params();
  return "tau=" + format_value(cpma.tau);
}

bool MethodSpec::implemented() const { return kind != Kind::Pruner || pruner.implemented(); }

MedialAxisTransform skeletonize(const BinaryGrid& grid, const MethodSpec& method) {
  switch (method.kind) {
    case MethodSpec::Kind::Pruner: return prune(grid, method.pruner);
    case MethodSpec::Kind::Cpma: return extract_cpma(grid, method.cpma).axis;
    case MethodSpec::Kind::ConnectedCpma: {
      auto r = extract_cpma(grid, method.cpma);
      return connect_cpma(r.axis, r.score, grid, method.cpma).axis;
    }
  }
  throw UnimplementedError("unknown method kind");
}

// ---------------------------------------------------------------------------
// Datasets

Dataset scan_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw DomainError("dataset directory '" + dir.string() + "' does not exist");
  Dataset d;
  d.name = dir.filename().string();
  if (d.name.empty()) d.name = dir.parent_path().filename().string();
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".pbm" || ext == ".vox" || ext == ".ply")
      d.items.push_back({entry.path().stem().string(), entry.path()});
  }
  std::sort(d.items.begin(), d.items.end(), [](const DatasetItem& a, const DatasetItem& b) {
    return std::tie(a.stem, a.path) < std::tie(b.stem, b.path);
  });
  if (d.items.empty()) throw DomainError("dataset '" + dir.string() + "' contains no .pbm/.vox/.ply files");
  return d;
}

BinaryGrid load_item(const DatasetItem& item, int resolution) {
  std::string ext = item.path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".ply") {
    BinaryGrid g = voxelize(parse_ply(item.path), resolution);
    if (g.count() == 0) throw DomainError("empty shape after voxelization");
    return g;
  }
  return load_grid(item.path);
}

namespace {

using ItemFn = std::function<std::vector<BenchmarkRecord>(const DatasetItem&, const BinaryGrid&)>;

std::ostream& log_stream(const RunOptions& o) { return o.log ? *o.log : std::cerr; }

std::vector<BenchmarkRecord> run_items(const Dataset& dataset, const RunOptions& options,
                                       const ItemFn& fn) {
  std::vector<std::vector<BenchmarkRecord>> per_item(dataset.items.size());
  std::mutex log_mutex;
  auto process = [&](std::size_t k) {
    const DatasetItem& item = dataset.items[k];
    try {
      const BinaryGrid g = load_item(item, options.resolution);
      per_item[k] = fn(item, g);
    } catch (const std::exception& ex) {
      std::lock_guard lock(log_mutex);
      log_stream(options) << "warning: skipping item '" << item.stem << "': " << ex.what() << '\n';
    }
  };

  unsigned workers = options.jobs > 0 ? static_cast<unsigned>(options.jobs)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(dataset.items.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < dataset.items.size(); k = next++) {
      if (options.stop && options.stop->load()) return;
      process(k);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<BenchmarkRecord> out;
  for (auto& v : per_item) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Appends per-group means (and optionally standard deviations) over items,
// accumulated in sorted item order.
void append_aggregates(std::vector<BenchmarkRecord>& records, bool with_std) {
  using Key = std::tuple<std::string, std::string, std::string, std::string, Metric, std::uint64_t>;
  std::map<Key, std::vector<std::pair<std::string, double>>> groups;
  for (const auto& r : records)
    groups[{r.dataset, r.method, r.params, r.perturbation, r.metric, r.seed}].emplace_back(r.item,
                                                                                           r.value);
  for (auto& [key, values] : groups) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (const auto& [item, v] : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    const auto& [dataset, method, params, perturbation, metric, seed] = key;
    records.push_back({dataset, std::string(kMeanItem), method, params, perturbation, metric, mean, seed});
    if (with_std) {
      double ss = 0.0;
      for (const auto& [item, v] : values) ss += (v - mean) * (v - mean);
      records.push_back({dataset, std::string(kStdItem), method, params, perturbation, metric,
                         std::sqrt(ss / static_cast<double>(values.size())), seed});
    }
  }
}

void add_distances(std::vector<BenchmarkRecord>& out, const BenchmarkRecord& base,
                   const MedialAxisTransform& a, const MedialAxisTransform& b,
                   std::ostream& log, std::mutex& log_mutex) {
  const auto pa = a.points();
  const auto pb = b.points();
  if (pa.empty() || pb.empty()) {
    std::lock_guard lock(log_mutex);
    log << "warning: empty skeleton for item '" << base.item << "', method " << base.method
        << (base.params.empty() ? "" : " (" + base.params + ")") << ", " << base.perturbation
        << "; metrics skipped\n";
    return;
  }
  BenchmarkRecord r = base;
  r.metric = Metric::Hausdorff;
  r.value = hausdorff(pa, pb);
  out.push_back(r);
  r.metric = Metric::DubuissonJain;
  r.value = dubuisson_jain(pa, pb);
  out.push_back(r);
}

std::string angle_label(const RotationSpec& r, int rank) {
  if (rank == 2) return "angle=" + format_value(r.angle2d);
  return "az=" + format_value(r.azimuth) + ";el=" + format_value(r.elevation);
}

std::vector<MethodSpec> checked(std::vector<MethodSpec> methods, int items_jobs) {
  for (auto& m : methods) {
    if (!m.implemented()) throw UnimplementedError("method not implemented: " + m.name());
    if (m.kind == MethodSpec::Kind::Pruner) m.pruner.validate();
    if (items_jobs != 1) m.cpma.threads = 1;
  }
  return methods;
}

}  // namespace

std::vector<BenchmarkRecord> run_noise_experiment(const std::filesystem::path& dir,
                                                  const std::vector<MethodSpec>& methods_in,
                                                  const std::vector<int>& levels,
                                                  std::uint64_t seed,
                                                  const RunOptions& options) {
  const Dataset dataset = scan_dataset(dir);
  const auto methods = checked(methods_in, options.jobs);
  for (const int k : levels)
    if (k < 0) throw ParameterError("noise levels must be >= 0");
  std::mutex log_mutex;

  auto records = run_items(dataset, options, [&](const DatasetItem& item, const BinaryGrid& g) {
    std::vector<BenchmarkRecord> out;
    std::vector<MedialAxisTransform> clean;
    for (const auto& m : methods) clean.push_back(skeletonize(g, m));
    const std::uint64_t item_seed = derive_seed(seed, item.stem);
    for (const int k : levels) {
      const BinaryGrid noisy = apply_noise(g, NoiseSpec::for_rank(g.rank(), k, item_seed));
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const BenchmarkRecord base{dataset.name, item.stem, methods[mi].name(),
                                   methods[mi].params(), "k=" + std::to_string(k),
                                   Metric::Hausdorff, 0.0, seed};
        add_distances(out, base, clean[mi], skeletonize(noisy, methods[mi]), log_stream(options),
                      log_mutex);
      }
    }
    return out;
  });
  append_aggregates(records, false);
  sort_records(records);
  return records;
}

std::vector<BenchmarkRecord> run_rotation_experiment(const std::filesystem::path& dir,
                                                     const std::vector<MethodSpec>& methods_in,
                                                     const std::vector<RotationSpec>& angles,
                                                     std::uint64_t seed,
                                                     const RunOptions& options) {
  const Dataset dataset = scan_dataset(dir);
  const auto methods = checked(methods_in, options.jobs);
  std::mutex log_mutex;

  auto records = run_items(dataset, options, [&](const DatasetItem& item, const BinaryGrid& g) {
    std::vector<BenchmarkRecord> out;
    std::vector<MedialAxisTransform> clean;
    for (const auto& m : methods) clean.push_back(skeletonize(g, m));
    for (const auto& angle : angles) {
      const BinaryGrid rotated = rotate_grid(g, angle);
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const BenchmarkRecord base{dataset.name, item.stem, methods[mi].name(),
                                   methods[mi].params(), angle_label(angle, g.rank()),
                                   Metric::Hausdorff, 0.0, seed};
        add_distances(out, base, skeletonize(rotated, methods[mi]),
                      rotate_points(clean[mi], angle, g.extents()), log_stream(options), log_mutex);
      }
    }
    return out;
  });
  append_aggregates(records, false);
  sort_records(records);
  return records;
}

std::vector<BenchmarkRecord> run_tau_sweep(const std::filesystem::path& dir,
                                           const std::vector<double>& taus,
                                           const std::vector<double>& scales, std::uint64_t seed,
                                           const RunOptions& options) {
  const Dataset dataset = scan_dataset(dir);
  for (const double t : taus)
    if (!(t > 0.0 && t < 1.0)) throw ParameterError("tau values must lie in (0, 1)");
  for (const double s : scales)
    if (!(s > 0.0)) throw ParameterError("scales must be > 0");

  auto records = run_items(dataset, options, [&](const DatasetItem& item, const BinaryGrid& g) {
    std::vector<BenchmarkRecord> out;
    for (const double s : scales) {
      const BinaryGrid shape = s == 1.0 ? g : scale_grid(g, s);
      CpmaConfig cfg;
      if (options.jobs != 1) cfg.threads = 1;
      const ScoreField score = score_function(shape, cfg);
      const DistanceField field = edt(shape);
      for (const double tau : taus) {
        cfg.tau = tau;
        const MedialAxisTransform axis = threshold_score(shape, field, score, tau);
        const auto connected = connect_cpma(axis, score, shape, cfg);
        const double jac = jaccard(reconstruct(connected.axis, shape.extents()), shape);
        const std::string params = "tau=" + format_value(tau);
        const std::string pert = "scale=" + format_value(s);
        out.push_back({dataset.name, item.stem, "C-CPMA", params, pert, Metric::Jaccard, jac, seed});
        out.push_back({dataset.name, item.stem, "CPMA", params, pert, Metric::SkeletonSize,
                       static_cast<double>(axis.size()), seed});
      }
    }
    return out;
  });
  append_aggregates(records, true);
  sort_records(records);
  return records;
}

// ---------------------------------------------------------------------------
// Output

void sort_records(std::vector<BenchmarkRecord>& records) {
  std::sort(records.begin(), records.end(), [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
    return std::tie(a.dataset, a.item, a.method, a.params, a.perturbation, a.metric, a.value,
                    a.seed) < std::tie(b.dataset, b.item, b.method, b.params, b.perturbation,
                                       b.metric, b.value, b.seed);
  });
}

namespace {

constexpr std::string_view kCsvHeader = "dataset,item,method,params,perturbation,metric,value,seed";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t& pos,
                                        std::string_view text) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  (void)line;
  while (pos < text.size()) {
    const char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          cur += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\n') {
      ++pos;
      break;
    } else if (c != '\r') {
      cur += c;
    }
    ++pos;
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::string to_csv(std::vector<BenchmarkRecord> records) {
  sort_records(records);
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += csv_field(r.dataset) + ',' + csv_field(r.item) + ',' + csv_field(r.method) + ',' +
           csv_field(r.params) + ',' + csv_field(r.perturbation) + ',' +
           std::string(to_string(r.metric)) + ',' + format_value(r.value) + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

std::vector<BenchmarkRecord> parse_csv(std::string_view text) {
  std::size_t pos = 0;
  const auto header = split_csv_line({}, pos, text);
  std::string joined;
  for (std::size_t k = 0; k < header.size(); ++k) joined += (k ? "," : "") + header[k];
  if (joined != kCsvHeader) throw FormatError("unexpected CSV header '" + joined + "'", 0);
  std::vector<BenchmarkRecord> out;
  while (pos < text.size()) {
    const std::size_t at = pos;
    const auto f = split_csv_line({}, pos, text);
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 8) throw FormatError("CSV row has " + std::to_string(f.size()) + " fields", at);
    BenchmarkRecord r{f[0], f[1], f[2], f[3], f[4], metric_from_string(f[5]), 0.0, 0};
    r.value = parse_number(f[6], "value");
    const auto [ptr, ec] = std::from_chars(f[7].data(), f[7].data() + f[7].size(), r.seed);
    if (ec != std::errc() || ptr != f[7].data() + f[7].size()) throw FormatError("invalid seed", at);
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_json(std::vector<BenchmarkRecord> records) {
  sort_records(records);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json o;
    o["dataset"] = r.dataset;
    o["item"] = r.item;
    o["method"] = r.method;
    o["params"] = r.params;
    o["perturbation"] = r.perturbation;
    o["metric"] = std::string(to_string(r.metric));
    o["value"] = r.value;
    o["seed"] = r.seed;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::vector<BenchmarkRecord> parse_json(std::string_view text) {
  const auto arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw FormatError("expected a JSON array of records", 0);
  std::vector<BenchmarkRecord> out;
  for (const auto& o : arr)
    out.push_back({o.at("dataset").get<std::string>(), o.at("item").get<std::string>(),
                   o.at("method").get<std::string>(), o.at("params").get<std::string>(),
                   o.at("perturbation").get<std::string>(),
                   metric_from_string(o.at("metric").get<std::string>()),
                   o.at("value").get<double>(), o.at("seed").get<std::uint64_t>()});
  return out;
}

void emit_results(const std::vector<BenchmarkRecord>& records, const std::filesystem::path& path,
                  OutputFormat format) {
  const std::string text = format == OutputFormat::Csv ? to_csv(records) : to_json(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace cpma::bench
