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

#include <cstdint>
#include <vector>

#include "svtrack/volume.hpp"

namespace svtrack {

struct SlicConfig {
  /// Target supervoxel count.
  int k = 2000;
  /// Weight of the spatial term relative to the [0,1]-normalized intensity
  /// term.
  double compactness = 0.2;
  int max_iters = 10;
  bool enforce_connectivity = true;
  /// Stop once no center moves more than tolerance * S (S = grid pitch).
  double tolerance = 1e-3;
  /// Disconnected fragments smaller than this many voxels are merged into a
  /// neighbor; 0 selects a quarter of the mean supervoxel size.
  std::uint64_t min_fragment = 0;
};

void validate(const SlicConfig& cfg);

struct SupervoxelCenter {
  double x = 0, y = 0, z = 0;  // physical coordinates (microns)
  double mean_intensity = 0;
};

struct SlicResult {
  LabelVolume labels;
  std::vector<SupervoxelCenter> centers;  // centers[l - 1] belongs to label l
  int iterations = 0;
  double pitch = 0;  // S, the expected supervoxel physical pitch
};

/// 3D SLIC over-segmentation of an intensity volume.
///
/// Intensities are min-max normalized to [0,1]. Centers start on a regular
/// physical grid and are nudged to the lowest-gradient voxel of their 3x3x3
/// neighborhood. Each iteration assigns every voxel inside a +-S window of a
/// center to the center minimizing
///   D^2 = (I - I_c)^2 + (d_phys / S)^2 * m^2,
/// ties going to the lower label, then moves centers to their cluster means.
/// Empty clusters are dropped; labels are consecutive 1..k' with k' <= k.
SlicResult slic_detailed(const Volume& intensity, const SlicConfig& cfg);

LabelVolume slic(const Volume& intensity, const SlicConfig& cfg);

/// Makes every label a single face-connected region. For each label the
/// largest piece keeps the id; other pieces of at least `min_fragment`
/// voxels get fresh ids above the current maximum; smaller pieces join the
/// largest face-adjacent region. `min_fragment == 0` uses a quarter of the
/// mean label size. Background (0) is left untouched.
LabelVolume enforce_connectivity(const LabelVolume& labels, std::uint64_t min_fragment = 0);

}  // namespace svtrack
