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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cpma/cpma.hpp"
#include "cpma/perturb.hpp"
#include "cpma/skeleton.hpp"

namespace cpma::bench {

enum class Metric { Hausdorff, DubuissonJain, Jaccard, SkeletonSize };

std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

/// A skeletonization method under test: one of the baseline pruners, the
/// thresholded CPMA, or the connected CPMA (C-CPMA).
struct MethodSpec {
  enum class Kind { Pruner, Cpma, ConnectedCpma };

  Kind kind = Kind::Pruner;
  PrunerSpec pruner;
  CpmaConfig cpma;

  static MethodSpec of(PrunerSpec p) { return {Kind::Pruner, p, {}}; }
  static MethodSpec cpma_method(CpmaConfig c = {}) { return {Kind::Cpma, {}, c}; }
  static MethodSpec connected_cpma(CpmaConfig c = {}) { return {Kind::ConnectedCpma, {}, c}; }

  /// Parses "mat", "thinning", "gima:5", "bema:120", "sat:1.2",
  /// "sfema:1.1", "cpma", "cpma:0.5", "ccpma", "poisson", "teasar".
  static MethodSpec parse(std::string_view token);

  std::string name() const;
  std::string params() const;
  bool implemented() const;
};

MedialAxisTransform skeletonize(const BinaryGrid& grid, const MethodSpec& method);

struct BenchmarkRecord {
  std::string dataset;
  std::string item;
  std::string method;
  std::string params;
  std::string perturbation;
  Metric metric = Metric::Hausdorff;
  double value = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

/// Item name used for per-group dataset means and standard deviations.
inline constexpr std::string_view kMeanItem = "@mean";
inline constexpr std::string_view kStdItem = "@std";

struct DatasetItem {
  std::string stem;
  std::filesystem::path path;
};

struct Dataset {
  std::string name;
  std::vector<DatasetItem> items;  // sorted by stem
};

/// Flat directory of .pbm / .vox / .ply files. Throws DomainError when no
/// usable file is present.
Dataset scan_dataset(const std::filesystem::path& dir);

struct RunOptions {
  /// Worker threads over dataset items; 0 = hardware concurrency.
  int jobs = 0;
  /// Voxel resolution for .ply items.
  int resolution = 64;
  /// Set from outside to stop after the items already in flight.
  const std::atomic<bool>* stop = nullptr;
  /// Warnings for skipped items; stderr when null.
  std::ostream* log = nullptr;
};

BinaryGrid load_item(const DatasetItem& item, int resolution);

std::vector<BenchmarkRecord> run_noise_experiment(const std::filesystem::path& dataset,
                                                  const std::vector<MethodSpec>& methods,
                                                  const std::vector<int>& levels,
                                                  std::uint64_t seed,
                                                  const RunOptions& options = {});

std::vector<BenchmarkRecord> run_rotation_experiment(const std::filesystem::path& dataset,
                                                     const std::vector<MethodSpec>& methods,
                                                     const std::vector<RotationSpec>& angles,
                                                     std::uint64_t seed,
                                                     const RunOptions& options = {});

std::vector<BenchmarkRecord> run_tau_sweep(const std::filesystem::path& dataset,
                                           const std::vector<double>& taus,
                                           const std::vector<double>& scales,
                                           std::uint64_t seed,
                                           const RunOptions& options = {});

enum class OutputFormat { Csv, Json };

/// Sorts by (dataset, item, method, params, perturbation, metric, value, seed).
void sort_records(std::vector<BenchmarkRecord>& records);

std::string to_csv(std::vector<BenchmarkRecord> records);
std::string to_json(std::vector<BenchmarkRecord> records);
std::vector<BenchmarkRecord> parse_csv(std::string_view text);
std::vector<BenchmarkRecord> parse_json(std::string_view text);

void emit_results(const std::vector<BenchmarkRecord>& records, const std::filesystem::path& path,
                  OutputFormat format);

/// Shortest round-trip decimal form.
std::string format_value(double v);

}  // namespace cpma::bench
