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

#include "svtrack/detection.hpp"
#include "svtrack/volume.hpp"

namespace svtrack {

struct WatershedConfig {
  Connectivity conn = Connectivity::Face6;
  /// Number of flooding levels probabilities are bucketed into (>= 2).
  int level_quantization = 256;
  /// Voxels with probability >= threshold are foreground.
  double mask_threshold = 0.5;
  /// Foreground components that contain no seed get a fresh label seeded at
  /// their maximum, so the output foreground equals the thresholded mask.
  /// When false such components are left as background.
  bool label_unseeded_components = true;
};

void validate(const WatershedConfig& cfg);

/// Seeded priority-flood watershed on the inverted probability map.
///
/// Seeds outside the foreground (and duplicate seed voxels) are dropped with
/// a warning; the remaining seeds get labels 1..n in SeedSet order. Voxels
/// are flooded in descending quantized probability, first-in first-out
/// within a level, so ties resolve by seed order then by discovery order.
/// A voxel's flooding level never exceeds the level of the voxel that
/// reached it. Throws AlgorithmError when no seed survives.
LabelVolume watershed(const Volume& prob, const SeedSet& seeds, const WatershedConfig& cfg = {});

}  // namespace svtrack
