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

#include "svtrack/adjacency_graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "svtrack/error.hpp"
#include "svtrack/morphology.hpp"

namespace svtrack {

NucleiGraph::NucleiGraph(std::vector<Label> vertices, int max_radius)
    : vertices_(std::move(vertices)), max_radius_(max_radius) {
  std::sort(vertices_.begin(), vertices_.end());
  for (Label v : vertices_) adjacency_[v];
}

void NucleiGraph::add_edge(Label a, Label b, int weight) {
  if (a == b) throw std::invalid_argument("self edges are not allowed");
  if (weight < 1) throw std::invalid_argument("edge weights must be >= 1");
  if (!adjacency_.contains(a) || !adjacency_.contains(b)) {
    throw std::out_of_range("edge endpoint is not a graph vertex");
  }
  const auto key = std::minmax(a, b);
  if (!edges_.emplace(key, weight).second) return;
  adjacency_[a].emplace_back(b, weight);
  adjacency_[b].emplace_back(a, weight);
  std::sort(adjacency_[a].begin(), adjacency_[a].end());
  std::sort(adjacency_[b].begin(), adjacency_[b].end());
}

std::optional<int> NucleiGraph::weight(Label a, Label b) const {
  auto it = edges_.find(std::minmax(a, b));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<Label, int>> NucleiGraph::neighbors(Label v) const {
  auto it = adjacency_.find(v);
  if (it == adjacency_.end()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return it->second;
}

int NucleiGraph::degree(Label v) const { return static_cast<int>(neighbors(v).size()); }

namespace {

Box expand(const Box& b, int r, const Dims& d) {
  return {{std::max(0, b.lo.x - r), std::max(0, b.lo.y - r), std::max(0, b.lo.z - r)},
          {std::min(d.nx - 1, b.hi.x + r), std::min(d.ny - 1, b.hi.y + r),
           std::min(d.nz - 1, b.hi.z + r)}};
}

Box merge(const Box& a, const Box& b) {
  return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y), std::min(a.lo.z, b.lo.z)},
          {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y), std::max(a.hi.z, b.hi.z)}};
}

// Voxels within `depth` neighborhood steps of `label`, with their step count.
// The search never leaves `box`, which must contain every such voxel.
std::vector<std::pair<std::size_t, int>> grow_layers(const LabelVolume& seg, Label label,
                                                     const Box& box, int depth,
                                                     Connectivity conn) {
  const int bx = box.hi.x - box.lo.x + 1, by = box.hi.y - box.lo.y + 1,
            bz = box.hi.z - box.lo.z + 1;
  std::vector<int> dist(static_cast<std::size_t>(bx) * by * bz, -1);
  auto local = [&](int x, int y, int z) {
    return (static_cast<std::size_t>(z - box.lo.z) * by + (y - box.lo.y)) * bx + (x - box.lo.x);
  };
  std::vector<Index3> frontier;
  std::vector<std::pair<std::size_t, int>> out;
  for (int z = box.lo.z; z <= box.hi.z; ++z) {
    for (int y = box.lo.y; y <= box.hi.y; ++y) {
      for (int x = box.lo.x; x <= box.hi.x; ++x) {
        if (seg(x, y, z) != label) continue;
        dist[local(x, y, z)] = 0;
        frontier.push_back({x, y, z});
        out.emplace_back(seg.index(x, y, z), 0);
      }
    }
  }
  const auto offsets = neighbor_offsets(conn);
  std::vector<Index3> next;
  for (int step = 1; step <= depth && !frontier.empty(); ++step) {
    next.clear();
    for (const Index3& p : frontier) {
      for (const Offset& o : offsets) {
        const int x = p.x + o.dx, y = p.y + o.dy, z = p.z + o.dz;
        if (x < box.lo.x || y < box.lo.y || z < box.lo.z || x > box.hi.x || y > box.hi.y ||
            z > box.hi.z) {
          continue;
        }
        int& dd = dist[local(x, y, z)];
        if (dd >= 0) continue;
        dd = step;
        next.push_back({x, y, z});
        out.emplace_back(seg.index(x, y, z), step);
      }
    }
    frontier.swap(next);
  }
  return out;
}

}  // namespace

std::optional<int> min_dilation_distance(const LabelVolume& seg, Label i, Label j, int max_radius,
                                         Connectivity conn) {
  if (i == j) throw std::invalid_argument("min_dilation_distance needs two distinct nuclei");
  if (max_radius < 1) throw std::invalid_argument("max_radius must be >= 1");
  const auto boxes = region_boxes(seg);
  auto bi = boxes.find(i);
  auto bj = boxes.find(j);
  if (i == 0 || bi == boxes.end()) throw std::out_of_range("unknown nucleus id " + std::to_string(i));
  if (j == 0 || bj == boxes.end()) throw std::out_of_range("unknown nucleus id " + std::to_string(j));

  // Everything reachable within max_radius steps lies in this crop, so
  // dilation and component analysis inside it match the full volume.
  const Box crop = expand(merge(bi->second, bj->second), max_radius, seg.dims());
  const Dims cd{crop.hi.x - crop.lo.x + 1, crop.hi.y - crop.lo.y + 1, crop.hi.z - crop.lo.z + 1};
  Mask board(cd, seg.spacing());
  for (int z = 0; z < cd.nz; ++z) {
    for (int y = 0; y < cd.ny; ++y) {
      for (int x = 0; x < cd.nx; ++x) {
        const Label l = seg(x + crop.lo.x, y + crop.lo.y, z + crop.lo.z);
        board(x, y, z) = (l == i || l == j) ? 1 : 0;
      }
    }
  }
  if (connected_components(board, conn).count == 1) return 1;
  for (int d = 1; d <= max_radius; ++d) {
    board = dilate_binary(board, conn, 1);
    if (connected_components(board, conn).count == 1) return d;
  }
  return std::nullopt;
}

NucleiGraph build_graph(const LabelVolume& seg, int max_radius, Connectivity conn) {
  if (max_radius < 1) throw std::invalid_argument("max_radius must be >= 1");
  const auto boxes = region_boxes(seg);
  std::vector<Label> ids;
  for (const auto& [l, b] : boxes) ids.push_back(l);
  NucleiGraph graph(ids, max_radius);
  if (ids.size() < 2) return graph;

  std::map<Label, int> pieces;
  {
    const Components comps = label_components(seg, conn);
    std::vector<bool> seen(comps.count + 1, false);
    for (std::size_t v = 0; v < seg.size(); ++v) {
      const Label c = comps.labels[v];
      if (c == 0 || seen[c]) continue;
      seen[c] = true;
      ++pieces[seg[v]];
    }
  }

  // (voxel, nucleus index, steps) for every voxel within max_radius + 1
  // steps of a nucleus.
  struct Hit {
    std::size_t voxel;
    std::uint32_t nucleus;
    int dist;
  };
  std::vector<Hit> hits;
  const int depth = max_radius + 1;
  for (std::uint32_t n = 0; n < ids.size(); ++n) {
    const Box box = expand(boxes.at(ids[n]), depth, seg.dims());
    for (const auto& [voxel, dist] : grow_layers(seg, ids[n], box, depth, conn)) {
      hits.push_back({voxel, n, dist});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.voxel != b.voxel ? a.voxel < b.voxel : a.nucleus < b.nucleus;
  });

  // Grown nuclei A (d steps) and B (d steps) are joined iff some voxel is
  // within d steps of one and d + 1 steps of the other.
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> best;
  for (std::size_t lo = 0; lo < hits.size();) {
    std::size_t hi = lo;
    while (hi < hits.size() && hits[hi].voxel == hits[lo].voxel) ++hi;
    for (std::size_t a = lo; a < hi; ++a) {
      for (std::size_t b = a + 1; b < hi; ++b) {
        const int da = hits[a].dist, db = hits[b].dist;
        const int d = std::min(std::max(da, db - 1), std::max(db, da - 1));
        if (d > max_radius) continue;
        auto [it, inserted] = best.try_emplace({hits[a].nucleus, hits[b].nucleus}, d);
        if (!inserted) it->second = std::min(it->second, d);
      }
    }
    lo = hi;
  }

  for (const auto& [pair, d] : best) {
    const Label a = ids[pair.first], b = ids[pair.second];
    if (pieces[a] == 1 && pieces[b] == 1) {
      graph.add_edge(a, b, std::max(1, d));
    } else if (auto w = min_dilation_distance(seg, a, b, max_radius, conn)) {
      graph.add_edge(a, b, *w);
    }
  }
  return graph;
}

void write_graph(const NucleiGraph& g, std::ostream& out) {
  out << "radius " << g.max_radius() << '\n' << "vertices";
  for (Label v : g.vertices()) out << ' ' << v;
  out << '\n';
  for (const auto& [key, w] : g.edges()) out << key.first << ' ' << key.second << ' ' << w << '\n';
}

NucleiGraph read_graph(std::istream& in) {
  std::string line, word;
  int radius = 0;
  std::vector<Label> vertices;
  if (!std::getline(in, line) || !(std::istringstream(line) >> word >> radius) ||
      word != "radius") {
    throw IoError("graph dump: expected 'radius R' header");
  }
  if (!std::getline(in, line)) throw IoError("graph dump: expected 'vertices' header");
  {
    std::istringstream ls(line);
    if (!(ls >> word) || word != "vertices") throw IoError("graph dump: expected 'vertices' header");
    Label v;
    while (ls >> v) vertices.push_back(v);
  }
  NucleiGraph g(vertices, radius);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Label a, b;
    int w;
    if (!(ls >> a >> b >> w)) throw IoError("graph dump: malformed edge line '" + line + "'");
    g.add_edge(a, b, w);
  }
  return g;
}

}  // namespace svtrack
