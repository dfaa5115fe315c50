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

#include "fixtures.hpp"

#include "svtrack/morphology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <vector>

#include <unistd.h>

namespace svtrack::fixture {

LabelVolume random_labels(Dims dims, Label max_label, std::mt19937_64& rng) {
  LabelVolume v(dims);
  std::uniform_int_distribution<Label> pick(0, max_label);
  for (Label& l : v.data()) l = pick(rng);
  return v;
}

void paint_box(LabelVolume& v, Index3 lo, Index3 hi, Label label) {
  for (int z = lo.z; z <= hi.z; ++z) {
    for (int y = lo.y; y <= hi.y; ++y) {
      for (int x = lo.x; x <= hi.x; ++x) v(x, y, z) = label;
    }
  }
}

LabelVolume random_boxes(Dims dims, int count, int max_side, std::mt19937_64& rng) {
  LabelVolume v(dims);
  Label next = 1;
  for (int attempt = 0; attempt < 200 * count && static_cast<int>(next) <= count; ++attempt) {
    auto side = [&](int n) { return std::uniform_int_distribution<int>(1, std::min(max_side, n))(rng); };
    const int sx = side(dims.nx), sy = side(dims.ny), sz = side(dims.nz);
    const Index3 lo{std::uniform_int_distribution<int>(0, dims.nx - sx)(rng),
                    std::uniform_int_distribution<int>(0, dims.ny - sy)(rng),
                    std::uniform_int_distribution<int>(0, dims.nz - sz)(rng)};
    const Index3 hi{lo.x + sx - 1, lo.y + sy - 1, lo.z + sz - 1};
    // Reject boxes that overlap or face-touch an existing one.
    bool clear = true;
    for (int z = std::max(0, lo.z - 1); clear && z <= std::min(dims.nz - 1, hi.z + 1); ++z) {
      for (int y = std::max(0, lo.y - 1); clear && y <= std::min(dims.ny - 1, hi.y + 1); ++y) {
        for (int x = std::max(0, lo.x - 1); x <= std::min(dims.nx - 1, hi.x + 1); ++x) {
          if (v(x, y, z) != 0) {
            clear = false;
            break;
          }
        }
      }
    }
    if (!clear) continue;
    paint_box(v, lo, hi, next++);
  }
  return v;
}

namespace {

// The tracker only sees volume and graph features, so two unrelated nuclei
// with the same voxel count in one frame are indistinguishable to it. Sisters
// are mirror images and always match; they count as one.
bool volumes_distinct(const SynthScript& s) {
  const SynthSequence seq = generate_sequence(s);
  std::map<Label, Label> family;  // sisters map to their parent, others to themselves
  for (const Track& t : seq.lineage.tracks) family[t.id] = t.parent != 0 ? t.parent : t.id;
  for (const LabelVolume& frame : seq.truth) {
    std::map<std::uint64_t, Label> seen;
    for (const auto& [label, n] : region_sizes(frame)) {
      const auto [it, fresh] = seen.emplace(n, family.at(label));
      if (!fresh && it->second != family.at(label)) return false;
    }
  }
  return true;
}

SynthScript tracking_script_draw(std::uint64_t seed, std::mt19937_64& rng,
                                 std::uniform_real_distribution<double>& unit) {
  SynthScript s;
  constexpr int kCell = 40;  // voxels between lattice centers
  constexpr int kCols = 4, kRows = 3;
  s.dims = {kCell * kCols, kCell * kRows, 10};
  s.spacing = {0.25, 0.25, 1.0};
  s.frames = 5 + static_cast<int>(seed % 3);
  s.noise = 0.0;
  s.seed = seed;

  std::vector<int> cells(kCols * kRows);
  for (int i = 0; i < kCols * kRows; ++i) cells[static_cast<std::size_t>(i)] = i;
  std::shuffle(cells.begin(), cells.end(), rng);
  const int n = 6 + static_cast<int>(seed % 5);  // 6..10 nuclei
  for (int k = 0; k < n; ++k) {
    const int c = cells[static_cast<std::size_t>(k)];
    EllipsoidSpec e;
    e.name = "n" + std::to_string(k);
    const double cx = ((c % kCols) * kCell + kCell / 2) * s.spacing.sx;
    const double cy = ((c / kCols) * kCell + kCell / 2) * s.spacing.sy;
    const double rx = 1.5 + 0.5 * (k + unit(rng) * 0.5) / n;
    e.center = {cx, cy, 5.0};
    e.radii = {rx, 1.4 + 0.4 * unit(rng), 2.0 + unit(rng)};
    e.peak = 0.8;
    s.nuclei.push_back(e);
  }
  // Divide one or two nuclei along x into touching-distance daughters, and
  // remove a different one.
  const int divisions = 1 + static_cast<int>(seed % 2);
  for (int k = 0; k < divisions; ++k) {
    const EllipsoidSpec& p = s.nuclei[static_cast<std::size_t>(k)];
    DivisionEvent d;
    d.frame = 1 + static_cast<int>((seed + static_cast<std::uint64_t>(k)) % static_cast<std::uint64_t>(s.frames - 2));
    d.parent = p.name;
    d.child_a = p.name + "a";
    d.child_b = p.name + "b";
    d.scale = 0.8;
    d.offset = {p.radii[0] * d.scale + 0.3, 0.0, 0.0};
    s.divisions.push_back(d);
  }
  s.apoptoses.push_back({1 + static_cast<int>(seed % static_cast<std::uint64_t>(s.frames - 1)),
                         s.nuclei[static_cast<std::size_t>(divisions)].name});
  return s;
}

}  // namespace

SynthScript tracking_script(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    SynthScript s = tracking_script_draw(seed, rng, unit);
    if (volumes_distinct(s)) return s;
  }
}

SynthScript crowded_script(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SynthScript s;
  s.dims = {96, 96, 16};
  s.spacing = {0.25, 0.25, 1.0};
  s.frames = 1;
  s.noise = 0.1;
  s.seed = seed;
  const int want = 5 + static_cast<int>(rng() % 16);
  struct Placed {
    double x, y, z, rx, ry, rz;
  };
  std::vector<Placed> placed;
  for (int attempt = 0; attempt < 5000 && static_cast<int>(placed.size()) < want; ++attempt) {
    const Placed c{0, 0, 0, 1.6 + 1.2 * unit(rng), 1.6 + 1.2 * unit(rng), 2.5 + 2.0 * unit(rng)};
    const double x = c.rx + 0.5 + unit(rng) * (s.dims.nx * s.spacing.sx - 2 * c.rx - 1.0);
    const double y = c.ry + 0.5 + unit(rng) * (s.dims.ny * s.spacing.sy - 2 * c.ry - 1.0);
    const double z = c.rz + unit(rng) * (s.dims.nz * s.spacing.sz - 2 * c.rz - 1.0);
    // Bounding boxes padded by half a micron in x and y must not intersect.
    bool ok = true;
    for (const Placed& p : placed) {
      if (std::abs(p.x - x) < p.rx + c.rx + 0.5 && std::abs(p.y - y) < p.ry + c.ry + 0.5 &&
          std::abs(p.z - z) < p.rz + c.rz) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    placed.push_back({x, y, z, c.rx, c.ry, c.rz});
    EllipsoidSpec e;
    e.name = "c" + std::to_string(placed.size());
    e.center = {x, y, z};
    e.radii = {c.rx, c.ry, c.rz};
    e.peak = 0.6 + 0.3 * unit(rng);
    s.nuclei.push_back(e);
  }
  return s;
}

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directories(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

namespace {

std::set<std::filesystem::path> relative_files(const std::filesystem::path& root) {
  std::set<std::filesystem::path> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.insert(std::filesystem::relative(e.path(), root));
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b, std::string* why) {
  const auto fa = relative_files(a);
  const auto fb = relative_files(b);
  if (fa != fb) {
    if (why) *why = "file sets differ";
    return false;
  }
  for (const auto& f : fa) {
    if (slurp(a / f) != slurp(b / f)) {
      if (why) *why = f.string() + " differs";
      return false;
    }
  }
  return true;
}

}  // namespace svtrack::fixture
