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
#include <filesystem>
#include <random>
#include <string>

#include "svtrack/synth.hpp"
#include "svtrack/volume.hpp"

namespace svtrack::fixture {

/// Uniform random labels in [0, max_label].
LabelVolume random_labels(Dims dims, Label max_label, std::mt19937_64& rng);

/// `count` random non-touching boxes labeled 1..count (fewer if they do not
/// fit after many attempts).
LabelVolume random_boxes(Dims dims, int count, int max_side, std::mt19937_64& rng);

/// Axis-aligned box [lo, hi] (inclusive) set to `label`.
void paint_box(LabelVolume& v, Index3 lo, Index3 hi, Label label);

/// Lattice of isolated nuclei with at least one division and one apoptosis.
/// Meant to be tracked with a graph radius of at most 4.
SynthScript tracking_script(std::uint64_t seed);

/// Single-frame scene of 5..20 non-overlapping ellipsoids with noise 0.1.
SynthScript crowded_script(std::uint64_t seed);

/// Creates a fresh directory under the system temp dir; removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "svtrack");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Byte-exact comparison of two directory trees.
bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b,
               std::string* why = nullptr);

}  // namespace svtrack::fixture
