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

#include <benchmark/benchmark.h>

#include "cpma/cpma.hpp"
#include "cpma/distfield.hpp"
#include "cpma/skeleton.hpp"
#include "cpma/transform.hpp"

namespace {

cpma::BinaryGrid disc(int n) {
  cpma::BinaryGrid g(cpma::Extents(n, n));
  const double c = (n - 1) / 2.0, r = n * 0.35;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if ((x - c) * (x - c) + (y - c) * (y - c) <= r * r) g.set(cpma::GridPoint(x, y), true);
  return g;
}

void BM_DctForward(benchmark::State& state) {
  const auto g = disc(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cpma::dct_forward(g));
}
BENCHMARK(BM_DctForward)->Arg(64)->Arg(128)->Arg(256);

void BM_Edt(benchmark::State& state) {
  const auto g = disc(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cpma::edt(g));
}
BENCHMARK(BM_Edt)->Arg(64)->Arg(128)->Arg(256);

void BM_ExtractMat(benchmark::State& state) {
  const auto g = disc(static_cast<int>(state.range(0)));
  const auto field = cpma::edt(g);
  for (auto _ : state) benchmark::DoNotOptimize(cpma::extract_mat(g, field));
}
BENCHMARK(BM_ExtractMat)->Arg(64)->Arg(128)->Arg(256);

void BM_ScoreFunction(benchmark::State& state) {
  const auto g = disc(static_cast<int>(state.range(0)));
  cpma::CpmaConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(cpma::score_function(g, cfg));
}
BENCHMARK(BM_ScoreFunction)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
