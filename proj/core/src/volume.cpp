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

#include "svtrack/volume.hpp"

#include <algorithm>
#include <cmath>

namespace svtrack {
namespace {

std::vector<Offset> make_offsets(int want) {
  std::vector<Offset> out;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int manhattan = std::abs(dx) + std::abs(dy) + std::abs(dz);
        if (manhattan == 0) continue;
        if (want == 6 && manhattan > 1) continue;
        if (want == 18 && manhattan > 2) continue;
        out.push_back({dx, dy, dz});
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(const Dims& d) {
  return "(" + std::to_string(d.nx) + "," + std::to_string(d.ny) + "," +
         std::to_string(d.nz) + ")";
}

void validate_geometry(const Dims& dims, const Spacing& spacing) {
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0) {
    throw std::invalid_argument("volume dims must be positive, got " +
                                to_string(dims));
  }
  if (!(spacing.sx > 0.0) || !(spacing.sy > 0.0) || !(spacing.sz > 0.0)) {
    throw std::invalid_argument("voxel spacing must be strictly positive");
  }
}

Connectivity connectivity_from_int(int n) {
  switch (n) {
    case 6:
      return Connectivity::Face6;
    case 18:
      return Connectivity::FaceEdge18;
    case 26:
      return Connectivity::Full26;
    default:
      throw std::invalid_argument("connectivity must be 6, 18 or 26, got " +
                                  std::to_string(n));
  }
}

std::span<const Offset> neighbor_offsets(Connectivity conn) {
  static const std::vector<Offset> face = make_offsets(6);
  static const std::vector<Offset> edge = make_offsets(18);
  static const std::vector<Offset> full = make_offsets(26);
  switch (conn) {
    case Connectivity::Face6:
      return face;
    case Connectivity::FaceEdge18:
      return edge;
    case Connectivity::Full26:
      return full;
  }
  return face;
}

void check_probability_range(const Volume& v) {
  for (float p : v.data()) {
    if (!std::isfinite(p) || p < 0.0f || p > 1.0f) {
      throw std::invalid_argument("probability map value outside [0,1]");
    }
  }
}

Volume normalize_min_max(const Volume& v) {
  Volume out = Volume::like(v);
  if (v.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.data().begin(), v.data().end());
  const float range = *hi - *lo;
  if (!(range > 0.0f)) return out;
  const float low = *lo;
  std::transform(v.data().begin(), v.data().end(), out.data().begin(),
                 [&](float x) { return (x - low) / range; });
  return out;
}

double physical_distance(const Index3& a, const Index3& b, const Spacing& s) {
  const double dx = (a.x - b.x) * s.sx;
  const double dy = (a.y - b.y) * s.sy;
  const double dz = (a.z - b.z) * s.sz;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Mask mask_of(const LabelVolume& labels, Label label) {
  Mask out = Mask::like(labels);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = labels[i] == label ? 1 : 0;
  }
  return out;
}

Mask foreground_of(const LabelVolume& labels) {
  Mask out = Mask::like(labels);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = labels[i] != 0 ? 1 : 0;
  }
  return out;
}

}  // namespace svtrack
