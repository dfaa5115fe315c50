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

#include "svtrack/slic.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "svtrack/morphology.hpp"

namespace svtrack {
namespace {

struct Grid {
  int n[3];
  double pitch;  // S
};

Grid seed_grid(const Dims& d, const Spacing& s, int k) {
  const double extent[3] = {d.nx * s.sx, d.ny * s.sy, d.nz * s.sz};
  const int len[3] = {d.nx, d.ny, d.nz};
  const double pitch = std::cbrt(extent[0] * extent[1] * extent[2] / k);
  Grid g{{1, 1, 1}, pitch};
  for (int a = 0; a < 3; ++a) {
    g.n[a] = std::clamp(static_cast<int>(std::lround(extent[a] / pitch)), 1, len[a]);
  }
  auto product = [&] {
    return static_cast<long long>(g.n[0]) * g.n[1] * g.n[2];
  };
  // Shrink the densest axis until we do not exceed k ...
  while (product() > k) {
    int best = -1;
    for (int a = 0; a < 3; ++a) {
      if (g.n[a] > 1 && (best < 0 || extent[a] / g.n[a] < extent[best] / g.n[best])) best = a;
    }
    --g.n[best];
  }
  // ... then refine the coarsest axis while that still fits.
  for (;;) {
    int best = -1;
    for (int a = 0; a < 3; ++a) {
      if (g.n[a] >= len[a]) continue;
      if (product() / g.n[a] * (g.n[a] + 1) > k) continue;
      if (best < 0 || extent[a] / g.n[a] > extent[best] / g.n[best]) best = a;
    }
    if (best < 0) break;
    ++g.n[best];
  }
  return g;
}

double gradient_sq(const Volume& v, int x, int y, int z) {
  auto at = [&](int xx, int yy, int zz) {
    return static_cast<double>(v(std::clamp(xx, 0, v.dims().nx - 1),
                                 std::clamp(yy, 0, v.dims().ny - 1),
                                 std::clamp(zz, 0, v.dims().nz - 1)));
  };
  const double gx = at(x + 1, y, z) - at(x - 1, y, z);
  const double gy = at(x, y + 1, z) - at(x, y - 1, z);
  const double gz = at(x, y, z + 1) - at(x, y, z - 1);
  return gx * gx + gy * gy + gz * gz;
}

}  // namespace

void validate(const SlicConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("slic k must be >= 1");
  if (!(cfg.compactness >= 0.0)) throw std::invalid_argument("slic compactness must be >= 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("slic max_iters must be >= 1");
}

SlicResult slic_detailed(const Volume& raw, const SlicConfig& cfg) {
  validate(cfg);
  if (raw.empty()) throw std::invalid_argument("slic: empty volume");
  if (static_cast<std::size_t>(cfg.k) > raw.size()) {
    throw std::invalid_argument("slic: k=" + std::to_string(cfg.k) +
                                " exceeds the voxel count " + std::to_string(raw.size()));
  }
  const Volume img = normalize_min_max(raw);
  const Dims d = img.dims();
  const Spacing sp = img.spacing();
  const Grid grid = seed_grid(d, sp, cfg.k);
  const double S = grid.pitch;
  const double spatial_weight = cfg.compactness * cfg.compactness / (S * S);

  std::vector<SupervoxelCenter> centers;
  for (int gz = 0; gz < grid.n[2]; ++gz) {
    for (int gy = 0; gy < grid.n[1]; ++gy) {
      for (int gx = 0; gx < grid.n[0]; ++gx) {
        int cx = static_cast<int>((gx + 0.5) * d.nx / grid.n[0]);
        int cy = static_cast<int>((gy + 0.5) * d.ny / grid.n[1]);
        int cz = static_cast<int>((gz + 0.5) * d.nz / grid.n[2]);
        double best = gradient_sq(img, cx, cy, cz);
        int bx = cx, by = cy, bz = cz;
        for (int dz = -1; dz <= 1; ++dz) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int x = cx + dx, y = cy + dy, z = cz + dz;
              if (!img.contains(x, y, z)) continue;
              const double g = gradient_sq(img, x, y, z);
              if (g < best) {
                best = g;
                bx = x, by = y, bz = z;
              }
            }
          }
        }
        centers.push_back({bx * sp.sx, by * sp.sy, bz * sp.sz, img(bx, by, bz)});
      }
    }
  }

  // Half-window per axis, in voxels. Never narrower than the grid pitch so
  // that the initial windows tile the volume.
  int half[3];
  {
    const int len[3] = {d.nx, d.ny, d.nz};
    const double s[3] = {sp.sx, sp.sy, sp.sz};
    for (int a = 0; a < 3; ++a) {
      const double pitch_a = len[a] * s[a] / grid.n[a];
      half[a] = static_cast<int>(std::ceil(std::max(S, pitch_a) / s[a]));
    }
  }

  LabelVolume assign = LabelVolume::like(img);
  std::vector<double> dist(img.size());
  int iterations = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    ++iterations;
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(assign.data().begin(), assign.data().end(), 0);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const SupervoxelCenter& ctr = centers[c];
      const int cx = static_cast<int>(std::lround(ctr.x / sp.sx));
      const int cy = static_cast<int>(std::lround(ctr.y / sp.sy));
      const int cz = static_cast<int>(std::lround(ctr.z / sp.sz));
      const int x0 = std::max(0, cx - half[0]), x1 = std::min(d.nx - 1, cx + half[0]);
      const int y0 = std::max(0, cy - half[1]), y1 = std::min(d.ny - 1, cy + half[1]);
      const int z0 = std::max(0, cz - half[2]), z1 = std::min(d.nz - 1, cz + half[2]);
      const Label label = static_cast<Label>(c + 1);
      for (int z = z0; z <= z1; ++z) {
        const double dz = z * sp.sz - ctr.z;
        for (int y = y0; y <= y1; ++y) {
          const double dy = y * sp.sy - ctr.y;
          std::size_t i = img.index(x0, y, z);
          for (int x = x0; x <= x1; ++x, ++i) {
            const double dx = x * sp.sx - ctr.x;
            const double di = img[i] - ctr.mean_intensity;
            const double D = di * di + (dx * dx + dy * dy + dz * dz) * spatial_weight;
            if (D < dist[i]) {
              dist[i] = D;
              assign[i] = label;
            }
          }
        }
      }
    }
    // Voxels outside every window (centers drifted apart) take the globally
    // nearest center.
    for (std::size_t i = 0; i < img.size(); ++i) {
      if (assign[i] != 0) continue;
      const Index3 p = img.coord(i);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double dx = p.x * sp.sx - centers[c].x, dy = p.y * sp.sy - centers[c].y,
                     dz = p.z * sp.sz - centers[c].z, di = img[i] - centers[c].mean_intensity;
        const double D = di * di + (dx * dx + dy * dy + dz * dz) * spatial_weight;
        if (D < best) {
          best = D;
          assign[i] = static_cast<Label>(c + 1);
        }
      }
    }

    std::vector<SupervoxelCenter> sums(centers.size());
    std::vector<std::uint64_t> counts(centers.size(), 0);
    for (std::size_t i = 0; i < img.size(); ++i) {
      const std::size_t c = assign[i] - 1;
      const Index3 p = img.coord(i);
      sums[c].x += p.x * sp.sx;
      sums[c].y += p.y * sp.sy;
      sums[c].z += p.z * sp.sz;
      sums[c].mean_intensity += img[i];
      ++counts[c];
    }
    double moved = 0.0;
    std::vector<SupervoxelCenter> next;
    std::vector<Label> remap(centers.size() + 1, 0);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (counts[c] == 0) continue;
      const double n = static_cast<double>(counts[c]);
      SupervoxelCenter m{sums[c].x / n, sums[c].y / n, sums[c].z / n, sums[c].mean_intensity / n};
      moved = std::max(moved, std::hypot(m.x - centers[c].x, m.y - centers[c].y, m.z - centers[c].z));
      next.push_back(m);
      remap[c + 1] = static_cast<Label>(next.size());
    }
    if (next.size() != centers.size()) {
      for (Label& l : assign.data()) l = remap[l];
    }
    centers = std::move(next);
    if (moved < cfg.tolerance * S) break;
  }

  SlicResult result{std::move(assign), std::move(centers), iterations, S};
  if (cfg.enforce_connectivity) {
    result.labels = enforce_connectivity(result.labels, cfg.min_fragment);
    if (result.labels.size() > 0) {
      // Fresh fragment labels have no k-means center; recompute all means.
      const auto n_labels = region_sizes(result.labels).size();
      std::vector<SupervoxelCenter> sums(n_labels);
      std::vector<std::uint64_t> counts(n_labels, 0);
      for (std::size_t i = 0; i < img.size(); ++i) {
        const std::size_t c = result.labels[i] - 1;
        const Index3 p = img.coord(i);
        sums[c].x += p.x * sp.sx;
        sums[c].y += p.y * sp.sy;
        sums[c].z += p.z * sp.sz;
        sums[c].mean_intensity += img[i];
        ++counts[c];
      }
      for (std::size_t c = 0; c < n_labels; ++c) {
        const double n = static_cast<double>(counts[c]);
        sums[c] = {sums[c].x / n, sums[c].y / n, sums[c].z / n, sums[c].mean_intensity / n};
      }
      result.centers = std::move(sums);
    }
  }
  return result;
}

LabelVolume slic(const Volume& intensity, const SlicConfig& cfg) {
  return slic_detailed(intensity, cfg).labels;
}

LabelVolume enforce_connectivity(const LabelVolume& labels, std::uint64_t min_fragment) {
  const Components comps = label_components(labels, Connectivity::Face6);
  if (comps.count == 0) return labels;
  const std::size_t n = comps.count + 1;  // component ids are 1-based

  std::vector<std::uint64_t> size(n, 0);
  std::vector<Label> original(n, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Label c = comps.labels[i];
    if (c == 0) continue;
    ++size[c];
    original[c] = labels[i];
  }

  // Anchor = largest piece of each label (lowest component id on ties).
  std::map<Label, Label> anchor;
  Label max_label = 0;
  for (Label c = 1; c < n; ++c) {
    max_label = std::max(max_label, original[c]);
    auto [it, inserted] = anchor.try_emplace(original[c], c);
    if (!inserted && size[c] > size[it->second]) it->second = c;
  }
  if (anchor.size() == comps.count) return labels;

  if (min_fragment == 0) {
    std::uint64_t total = 0;
    for (Label c = 1; c < n; ++c) total += size[c];
    min_fragment = std::max<std::uint64_t>(1, total / anchor.size() / 4);
  }

  std::vector<Label> out_label(n, 0);  // 0 = orphan, to be merged
  for (const auto& [label, c] : anchor) out_label[c] = label;
  for (Label c = 1; c < n; ++c) {
    if (out_label[c] == 0 && size[c] >= min_fragment) out_label[c] = ++max_label;
  }

  // Face adjacency between components.
  std::vector<std::set<Label>> adjacent(n);
  const Dims d = labels.dims();
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        const Label a = comps.labels(x, y, z);
        if (a == 0) continue;
        const int nb[3][3] = {{x + 1, y, z}, {x, y + 1, z}, {x, y, z + 1}};
        for (const auto& q : nb) {
          if (!labels.contains(q[0], q[1], q[2])) continue;
          const Label b = comps.labels(q[0], q[1], q[2]);
          if (b == 0 || b == a) continue;
          adjacent[a].insert(b);
          adjacent[b].insert(a);
        }
      }
    }
  }

  // Union-find over components; a group holds at most one rooted component.
  std::vector<Label> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::uint64_t> group_size = size;
  std::vector<Label> group_label = out_label;
  auto find = [&](Label c) {
    while (parent[c] != c) {
      parent[c] = parent[parent[c]];
      c = parent[c];
    }
    return c;
  };
  for (Label c = 1; c < n; ++c) {
    if (out_label[c] != 0) continue;
    const Label own = find(c);
    if (group_label[own] != 0) continue;  // already attached to a rooted group
    Label target = 0;
    for (Label b : adjacent[c]) {
      const Label g = find(b);
      if (g == own) continue;
      if (target == 0 || group_size[g] > group_size[target]) target = g;
    }
    if (target == 0) continue;
    parent[own] = target;
    group_size[target] += group_size[own];
  }

  LabelVolume out = labels;
  std::map<Label, Label> fresh;  // groups with no rooted component
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Label c = comps.labels[i];
    if (c == 0) continue;
    const Label g = find(c);
    Label l = group_label[g];
    if (l == 0) {
      auto [it, inserted] = fresh.try_emplace(g, 0);
      if (inserted) it->second = ++max_label;
      l = it->second;
    }
    out[i] = l;
  }
  return out;
}

}  // namespace svtrack
