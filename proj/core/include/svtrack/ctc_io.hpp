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

// Cell Tracking Challenge layout: multi-page grayscale TIFF stacks (z = page
// index, x fastest in memory) and `id begin end parent` lineage text files.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svtrack/lineage.hpp"
#include "svtrack/volume.hpp"

namespace svtrack {

enum class SampleKind { Unsigned, Float };

/// Raw TIFF stack with samples widened to double, unscaled.
struct TiffStack {
  Dims dims;
  int bits_per_sample = 0;
  SampleKind kind = SampleKind::Unsigned;
  std::optional<Spacing> spacing;  // recovered from ImageDescription if present
  std::vector<double> values;
};

TiffStack read_tiff_stack(const std::filesystem::path& path);

/// Intensity volume with raw sample values (no rescaling).
Volume read_volume_tiff(const std::filesystem::path& path,
                        const Spacing& fallback_spacing = {});

/// Integer labels mapped verbatim from 8/16/32-bit unsigned pages.
LabelVolume read_label_tiff(const std::filesystem::path& path,
                            const Spacing& fallback_spacing = {});

/// 16-bit label stack; throws IoError if any label exceeds 65535.
void write_label_tiff(const std::filesystem::path& path, const LabelVolume& labels);

/// Values in [0,1] quantized to 16 bits (clamped).
void write_volume_tiff_u16(const std::filesystem::path& path, const Volume& v);

/// Values stored verbatim as 32-bit IEEE floats.
void write_volume_tiff_f32(const std::filesystem::path& path, const Volume& v);

struct SequenceLayout {
  std::filesystem::path root;
  std::string frame_pattern;  // printf-style with one integer field
  std::string lineage_file;   // empty when the layout carries no lineage

  static SequenceLayout raw_images(const std::filesystem::path& root);
  static SequenceLayout result(const std::filesystem::path& root);
  static SequenceLayout truth_tracking(const std::filesystem::path& gt_root);
  static SequenceLayout truth_segmentation(const std::filesystem::path& gt_root);

  [[nodiscard]] std::filesystem::path frame_path(int t) const;
  [[nodiscard]] std::filesystem::path lineage_path() const;

  /// Number of frames; indices must be contiguous from 0 or IoError names
  /// the first gap.
  [[nodiscard]] int count_frames() const;
};

std::vector<Volume> read_volume_sequence(const SequenceLayout& layout,
                                         const Spacing& fallback_spacing = {});
std::vector<LabelVolume> read_label_sequence(const SequenceLayout& layout,
                                             const Spacing& fallback_spacing = {});
void write_label_sequence(const SequenceLayout& layout,
                          const std::vector<LabelVolume>& frames);

/// One line per track, ascending id, "id begin end parent\n".
void write_lineage(const LineageTable& table, const std::filesystem::path& path);
LineageTable read_lineage(const std::filesystem::path& path);

}  // namespace svtrack
