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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "svtrack/config.hpp"
#include "svtrack/lineage.hpp"
#include "svtrack/volume.hpp"

namespace svtrack {

// Scripted synthetic nuclei sequences with exact ground truth.
//
// Script format (key = value, see docs/synth_script.md):
//   dims       = nx ny nz
//   spacing    = sx sy sz                (microns, default 0.09 0.09 1.0)
//   frames     = T
//   noise      = level                   (std-dev or half-width, default 0)
//   noise_kind = gaussian | uniform
//   seed       = N
//   background = b                       (default 0.1)
//   nucleus    = name cx cy cz rx ry rz peak [vx vy vz [begin]]
//   division   = frame parent child_a child_b dx dy dz [scale]
//   apoptosis  = frame name

enum class NoiseKind { Gaussian, Uniform };

struct EllipsoidSpec {
  std::string name;
  std::array<double, 3> center{};  // microns, at the nucleus' first frame
  std::array<double, 3> radii{};   // microns
  double peak = 0.8;
  std::array<double, 3> drift{};   // microns per frame
  int begin = 0;
};

/// At `frame`, `parent` is replaced by two daughters centered at
/// parent -/+ offset with radii scaled by `scale`.
struct DivisionEvent {
  int frame = 0;
  std::string parent;
  std::string child_a;
  std::string child_b;
  std::array<double, 3> offset{};
  double scale = 0.8;
};

/// `name` is absent from `frame` onwards.
struct ApoptosisEvent {
  int frame = 0;
  std::string name;
};

struct SynthScript {
  Dims dims{64, 64, 16};
  Spacing spacing{0.09, 0.09, 1.0};
  int frames = 1;
  double noise = 0.0;
  NoiseKind noise_kind = NoiseKind::Gaussian;
  std::uint64_t seed = 0;
  double background = 0.1;
  std::vector<EllipsoidSpec> nuclei;
  std::vector<DivisionEvent> divisions;
  std::vector<ApoptosisEvent> apoptoses;
};

struct SynthSequence {
  std::vector<Volume> intensity;   // in [0,1]
  std::vector<LabelVolume> truth;  // labeled by track id
  LineageTable lineage;
};

SynthScript parse_script(const KeyValueFile& kv);
SynthScript load_script(const std::filesystem::path& path);
/// Script text that parses back to `script` (numbers at full precision).
std::string to_text(const SynthScript& script);

/// Renders the script. Track ids follow (begin frame, declaration order).
/// Inside an ellipsoid with normalized radius q (q <= 1) the intensity is
/// peak * (1 - q^2 / 2); outside it is the background; noise is added and the
/// result clamped to [0,1]. Throws ConfigError when two nuclei share a voxel,
/// when a live nucleus covers no voxel, or on inconsistent events.
SynthSequence generate_sequence(const SynthScript& script);

/// CTC layout: <out>/01/t%03d.tif, <out>/01_GT/TRA/man_track%03d.tif,
/// <out>/01_GT/TRA/man_track.txt, <out>/01_GT/SEG/man_seg%03d.tif.
void write_sequence(const SynthSequence& seq, const std::filesystem::path& out_dir);

}  // namespace svtrack
