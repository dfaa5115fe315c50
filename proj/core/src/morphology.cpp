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

#include "svtrack/morphology.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace svtrack {
namespace {

// Breadth-first flood over voxels for which `same(seed, candidate)` holds.
// Labels are handed out in raster order of each region's first voxel.
template <typename Grid, typename Pred>
Components flood_label(const Grid& grid, Connectivity conn, Pred same) {
  Components out{LabelVolume::like(grid), 0};
  const auto offsets = neighbor_offsets(conn);
  const Dims d = grid.dims();
  std::vector<std::size_t> queue;
  for (std::size_t start = 0; start < grid.size(); ++start) {
    if (grid[start] == 0 || out.labels[start] != 0) continue;
    const Label id = ++out.count;
    out.labels[start] = id;
    queue.clear();
    queue.push_back(start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t cur = queue[head];
      const Index3 p = grid.coord(cur);
      for (const Offset& o : offsets) {
        const int x = p.x + o.dx;
        const int y = p.y + o.dy;
        const int z = p.z + o.dz;
        if (x < 0 || y < 0 || z < 0 || x >= d.nx || y >= d.ny || z >= d.nz) {
          continue;
        }
        const std::size_t n = grid.index(x, y, z);
        if (out.labels[n] != 0 || !same(grid[start], grid[n])) continue;
        out.labels[n] = id;
        queue.push_back(n);
      }
    }
  }
  return out;
}

}  // namespace

Components connected_components(const Mask& mask, Connectivity conn) {
  for (auto v : mask.data()) {
    if (v > 1) {
      throw std::invalid_argument("connected_components expects a binary mask");
    }
  }
  return flood_label(mask, conn, [](auto, auto b) { return b != 0; });
}

Components label_components(const LabelVolume& labels, Connectivity conn) {
  return flood_label(labels, conn, [](Label a, Label b) { return a == b; });
}

bool labels_connected(const LabelVolume& labels, Connectivity conn) {
  return label_components(labels, conn).count == region_sizes(labels).size();
}

Mask dilate_binary(const Mask& mask, Connectivity element, int iterations) {
  if (iterations < 1) {
    throw std::invalid_argument("dilation iterations must be >= 1");
  }
  const auto offsets = neighbor_offsets(element);
  const Dims d = mask.dims();
  Mask cur = mask;
  for (auto& v : cur.data()) v = v != 0 ? 1 : 0;
  // Only the newly added shell can grow on the next pass.
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (cur[i]) frontier.push_back(i);
  }
  std::vector<std::size_t> next;
  for (int it = 0; it < iterations && !frontier.empty(); ++it) {
    next.clear();
    for (const std::size_t i : frontier) {
      const Index3 p = cur.coord(i);
      for (const Offset& o : offsets) {
        const int x = p.x + o.dx;
        const int y = p.y + o.dy;
        const int z = p.z + o.dz;
        if (x < 0 || y < 0 || z < 0 || x >= d.nx || y >= d.ny || z >= d.nz) {
          continue;
        }
        const std::size_t n = cur.index(x, y, z);
        if (cur[n]) continue;
        cur[n] = 1;
        next.push_back(n);
      }
    }
    frontier.swap(next);
  }
  return cur;
}

std::uint64_t region_voxel_count(const LabelVolume& labels, Label label) {
  const auto n = static_cast<std::uint64_t>(
      std::count(labels.data().begin(), labels.data().end(), label));
  if (n == 0 || label == 0) {
    throw std::out_of_range("unknown nucleus id " + std::to_string(label));
  }
  return n;
}

std::map<Label, std::uint64_t> region_sizes(const LabelVolume& labels) {
  std::map<Label, std::uint64_t> sizes;
  for (Label l : labels.data()) {
    if (l != 0) ++sizes[l];
  }
  return sizes;
}

std::map<Label, Box> region_boxes(const LabelVolume& labels) {
  std::map<Label, Box> boxes;
  const Dims d = labels.dims();
  std::size_t i = 0;
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x, ++i) {
        const Label l = labels[i];
        if (l == 0) continue;
        auto [it, inserted] = boxes.try_emplace(l, Box{{x, y, z}, {x, y, z}});
        if (inserted) continue;
        Box& b = it->second;
        b.lo = {std::min(b.lo.x, x), std::min(b.lo.y, y), std::min(b.lo.z, z)};
        b.hi = {std::max(b.hi.x, x), std::max(b.hi.y, y), std::max(b.hi.z, z)};
      }
    }
  }
  return boxes;
}

}  // namespace svtrack
