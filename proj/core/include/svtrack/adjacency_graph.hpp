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

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "svtrack/volume.hpp"

namespace svtrack {

/// Undirected nucleus graph; an edge weight is the number of joint dilations
/// after which two nuclei merge into one component (1 if already touching).
class NucleiGraph {
 public:
  NucleiGraph() = default;
  NucleiGraph(std::vector<Label> vertices, int max_radius);

  void add_edge(Label a, Label b, int weight);

  [[nodiscard]] const std::vector<Label>& vertices() const { return vertices_; }
  /// Keyed by (lower id, higher id).
  [[nodiscard]] const std::map<std::pair<Label, Label>, int>& edges() const { return edges_; }
  [[nodiscard]] int max_radius() const { return max_radius_; }

  [[nodiscard]] std::optional<int> weight(Label a, Label b) const;
  [[nodiscard]] std::vector<std::pair<Label, int>> neighbors(Label v) const;
  [[nodiscard]] int degree(Label v) const;

  friend bool operator==(const NucleiGraph&, const NucleiGraph&) = default;

 private:
  std::vector<Label> vertices_;
  std::map<std::pair<Label, Label>, int> edges_;
  std::map<Label, std::vector<std::pair<Label, int>>> adjacency_;
  int max_radius_ = 0;
};

/// Smallest d in [1, max_radius] such that dilating the union of nuclei i
/// and j d times yields a single connected component; nuclei that already
/// touch get 1. Returns nullopt when they do not merge within the cap.
/// Throws std::out_of_range for an absent label, std::invalid_argument for
/// i == j or max_radius < 1.
std::optional<int> min_dilation_distance(const LabelVolume& seg, Label i, Label j,
                                         int max_radius,
                                         Connectivity conn = Connectivity::Face6);

/// All-pairs adjacency graph with weights identical to
/// min_dilation_distance. Each nucleus is grown one radius step at a time
/// (breadth-first layers, up to max_radius + 1) and pairs are tested where
/// the grown shells meet, instead of re-dilating every pair. Pairs involving
/// a nucleus that is itself split into several pieces fall back to the
/// pairwise definition.
NucleiGraph build_graph(const LabelVolume& seg, int max_radius,
                        Connectivity conn = Connectivity::Face6);

/// Text dump: "radius R", "vertices v1 v2 ...", then one "i j w" line per
/// edge with i < j in ascending order.
void write_graph(const NucleiGraph& g, std::ostream& out);
NucleiGraph read_graph(std::istream& in);

}  // namespace svtrack
