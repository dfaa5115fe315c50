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

#include <random>

#include "svtrack/adjacency_graph.hpp"
#include "svtrack/tracker.hpp"

namespace {

using namespace svtrack;

std::vector<TrackFeature> random_features(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> vol(50.0, 500.0), w(1.0, 5.0);
  std::uniform_int_distribution<int> deg(0, 6);
  std::vector<TrackFeature> f;
  for (int i = 0; i < m; ++i) {
    const int d = deg(rng);
    f.push_back({static_cast<Label>(i + 1), vol(rng), d, d == 0 ? 0.0 : w(rng)});
  }
  return f;
}

void BM_LinkFrames(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int m = static_cast<int>(state.range(0));
  const auto a = random_features(m, rng), b = random_features(m, rng);
  for (auto _ : state) benchmark::DoNotOptimize(link_frames(a, b, 10.0));
  state.SetComplexityN(m);
}
BENCHMARK(BM_LinkFrames)->RangeMultiplier(2)->Range(25, 400)->Complexity(benchmark::oNSquared);

// Lattice of m^(1/3)-ish cubes with 2-voxel gaps.
LabelVolume cube_lattice(int per_axis) {
  const int side = 4, pitch = side + 2;
  LabelVolume v(Dims{per_axis * pitch, per_axis * pitch, 2 * pitch});
  Label next = 1;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < per_axis; ++j)
      for (int i = 0; i < per_axis; ++i, ++next)
        for (int z = 0; z < side; ++z)
          for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x) v(i * pitch + x, j * pitch + y, k * pitch + z) = next;
  return v;
}

void BM_BuildGraph(benchmark::State& state) {
  const LabelVolume v = cube_lattice(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(v, 3));
  state.SetComplexityN(2 * state.range(0) * state.range(0));
}
BENCHMARK(BM_BuildGraph)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
