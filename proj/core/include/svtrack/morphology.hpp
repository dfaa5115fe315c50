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
#include <map>

#include "svtrack/volume.hpp"

namespace svtrack {

struct Components {
  LabelVolume labels;
  Label count = 0;
};

/// Labels each maximal connected foreground region 1..count in raster-scan
/// first-encounter order. The mask must be binary; an empty mask yields
/// count 0.
Components connected_components(const Mask& mask,
                                Connectivity conn = Connectivity::Face6);

/// Splits every nonzero label into its connected pieces. Output ids are
/// assigned in raster first-encounter order; background stays 0.
Components label_components(const LabelVolume& labels,
                            Connectivity conn = Connectivity::Face6);

/// True when every nonzero label occupies a single connected region.
bool labels_connected(const LabelVolume& labels,
                      Connectivity conn = Connectivity::Face6);

/// Morphological dilation by the voxel structuring element implied by
/// `element`, applied `iterations` times. Saturates at the volume boundary.
Mask dilate_binary(const Mask& mask, Connectivity element, int iterations);

/// |C_label|; throws std::out_of_range for a label that is not present.
std::uint64_t region_voxel_count(const LabelVolume& labels, Label label);

/// Voxel count per nonzero label.
std::map<Label, std::uint64_t> region_sizes(const LabelVolume& labels);

struct Box {
  Index3 lo;  // inclusive
  Index3 hi;  // inclusive
};

/// Bounding boxes of every nonzero label.
std::map<Label, Box> region_boxes(const LabelVolume& labels);

}  // namespace svtrack
