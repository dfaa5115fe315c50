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

#include <filesystem>
#include <vector>

#include "svtrack/volume.hpp"

namespace svtrack {

struct Seed {
  Index3 position;
  float score = 0.0f;
};

/// Seeds ordered by descending score, ties by ascending raster index.
using SeedSet = std::vector<Seed>;

/// Loads a multi-page TIFF probability stack. Unsigned samples are divided by
/// the maximum of the declared bit depth; float samples are taken verbatim
/// and must already lie in [0,1].
Volume load_probability_map(const std::filesystem::path& path,
                            const Spacing& fallback_spacing = {});

/// Separable Gaussian smoothing with a physical-units sigma (replicated
/// borders).
Volume gaussian_smooth(const Volume& v, double sigma_microns);

/// Classical stand-in for a learned nucleus detector: per-voxel maximum of
/// the scale-normalized negative Laplacian-of-Gaussian over `radii`
/// (physical units, sigma = r / sqrt(3)), clipped at zero and divided by the
/// global maximum. A constant volume yields an all-zero map.
Volume blob_probability_map(const Volume& intensity, const std::vector<double>& radii);

/// Local maxima (26-neighborhood) with score >= min_score and > 0, greedily
/// suppressed in descending score order so that no two kept seeds are closer
/// than `min_separation` microns.
SeedSet extract_seeds(const Volume& prob, double min_score, double min_separation);

}  // namespace svtrack
