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

#include <vector>

#include "svtrack/adjacency_graph.hpp"
#include "svtrack/lineage.hpp"
#include "svtrack/volume.hpp"

namespace svtrack {

/// Per-nucleus tracking descriptor: physical volume plus the location
/// features taken from the adjacency graph.
struct TrackFeature {
  Label label = 0;
  double volume = 0;      // voxel count * sx * sy * sz (cubic microns)
  int degree = 0;         // number of graph neighbors
  double mean_weight = 0; // mean incident edge weight; 0 for isolated nuclei

  friend bool operator==(const TrackFeature&, const TrackFeature&) = default;
};

std::vector<TrackFeature> compute_features(const LabelVolume& seg, const NucleiGraph& graph);

/// Dissimilarity of `next` (frame t+1) to `ref` (frame t), relative to the
/// reference values:
///   |vol_r - vol_n| / vol_r + |deg_r - deg_n| / deg_r + |wdeg_r - wdeg_n| / wdeg_r.
/// A term whose reference value is zero contributes 0 when both values are
/// zero and 1 otherwise. Not symmetric.
double similarity(const TrackFeature& ref, const TrackFeature& next);

struct Link {
  Label from = 0;  // label in frame t
  Label to = 0;    // label in frame t+1
  double score = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Greedy one-to-one linking: all pairs with similarity < threshold, taken in
/// ascending (score, from, to) order, skipping nuclei already linked.
std::vector<Link> link_frames(const std::vector<TrackFeature>& current,
                              const std::vector<TrackFeature>& next, double threshold);

struct TrackerConfig {
  int max_radius = 10;  // adjacency graph cap
  Connectivity conn = Connectivity::Face6;
  double threshold = 1.0;
  /// Dilation radius of a vanished nucleus inside which new nuclei count as
  /// its daughters; negative means "same as max_radius".
  int division_radius = -1;
};

void validate(const TrackerConfig& cfg);

struct TrackingResult {
  LineageTable lineage;
  /// Input masks relabeled so that each voxel carries its track id.
  std::vector<LabelVolume> tracked;
};

/// Frame-by-frame tracking.
///
/// Frame-0 nuclei open tracks. For each consecutive pair, linked nuclei
/// extend their track; unlinked old nuclei end theirs (apoptosis or exit);
/// unlinked new nuclei open a track. A new track inherits a parent when it
/// overlaps the dilated region of a track that ended at the previous frame
/// and that track gained at least two such daughters. New track ids are
/// assigned in ascending (begin frame, label) order.
TrackingResult track_sequence(const std::vector<LabelVolume>& frames, const TrackerConfig& cfg);

}  // namespace svtrack
