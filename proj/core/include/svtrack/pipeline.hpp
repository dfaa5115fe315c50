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
#include <optional>
#include <string>
#include <vector>

#include "svtrack/boundary_correction.hpp"
#include "svtrack/config.hpp"
#include "svtrack/detection.hpp"
#include "svtrack/metrics.hpp"
#include "svtrack/volume.hpp"

namespace svtrack {

struct StageTimings {
  double detection_ms = 0;
  double watershed_ms = 0;
  double slic_ms = 0;
  double correction_ms = 0;
};

struct FrameSegmentation {
  Volume probability;
  SeedSet seeds;
  LabelVolume watershed;
  LabelVolume supervoxels;  // empty when correction is disabled
  CorrelationTable correlation;
  LabelVolume labels;       // final output
  StageTimings timings;
};

/// Detection, watershed, SLIC and boundary correction on one frame. When
/// `probability` is given it replaces the blob detector. SLIC k is doubled
/// (at most 4 times) while it yields no more supervoxels than watershed
/// regions.
FrameSegmentation segment_frame(const Volume& intensity, const PipelineConfig& cfg,
                                const std::optional<Volume>& probability = std::nullopt);

/// Raw images from `input_dir` (t%03d.tif) to mask%03d.tif in `output_dir`.
/// Frames run on `cfg.threads` workers; output does not depend on the count.
void run_segment(const PipelineConfig& cfg, const std::filesystem::path& input_dir,
                 const std::filesystem::path& output_dir);

/// Masks from `input_dir` (mask%03d.tif) to track-labeled masks plus
/// res_track.txt in `output_dir`.
void run_track(const PipelineConfig& cfg, const std::filesystem::path& input_dir,
               const std::filesystem::path& output_dir);

/// `result_dir` holds mask%03d.tif + res_track.txt; `truth_dir` holds TRA/
/// and optionally SEG/ (TRA masks are used for SEG when SEG/ is absent).
/// Writes scores.txt and scores.json to `output_dir` when it is non-empty.
Evaluation run_evaluate(const PipelineConfig& cfg, const std::filesystem::path& result_dir,
                        const std::filesystem::path& truth_dir,
                        const std::filesystem::path& output_dir);

/// `seed_override` replaces the script's seed when set.
void run_synth(const std::filesystem::path& script_path, const std::filesystem::path& output_dir,
               std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace svtrack
