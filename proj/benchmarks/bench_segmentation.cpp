// Copyright 2026 The svtrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "svtrack/detection.hpp"
#include "svtrack/slic.hpp"
#include "svtrack/synth.hpp"
#include "svtrack/watershed.hpp"

namespace {

using namespace svtrack;

Volume scene(int n) {
  SynthScript s;
  s.dims = {n, n, 16};
  s.spacing = {0.25, 0.25, 1.0};
  s.noise = 0.05;
  s.seed = 3;
  const double extent = n * 0.25;
  int id = 0;
  for (double cy = 2.5; cy + 2.5 < extent; cy += 5.0) {
    for (double cx = 2.5; cx + 2.5 < extent; cx += 5.0) {
      s.nuclei.push_back({"n" + std::to_string(id++), {cx, cy, 8.0}, {2.0, 1.8, 5.0}, 0.8, {}, 0});
    }
  }
  return generate_sequence(s).intensity[0];
}

void BM_Slic(benchmark::State& state) {
  const Volume v = scene(static_cast<int>(state.range(0)));
  SlicConfig cfg;
  cfg.k = static_cast<int>(v.size() / 200);
  for (auto _ : state) benchmark::DoNotOptimize(slic(v, cfg));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * v.size()));
}
BENCHMARK(BM_Slic)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Watershed(benchmark::State& state) {
  const Volume v = scene(static_cast<int>(state.range(0)));
  const Volume prob = blob_probability_map(v, {1.0, 1.5});
  const SeedSet seeds = extract_seeds(prob, 0.2, 1.5);
  WatershedConfig cfg;
  cfg.mask_threshold = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(watershed(prob, seeds, cfg));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * v.size()));
}
BENCHMARK(BM_Watershed)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
