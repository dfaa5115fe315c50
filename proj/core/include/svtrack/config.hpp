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
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svtrack/metrics.hpp"
#include "svtrack/slic.hpp"
#include "svtrack/tracker.hpp"
#include "svtrack/volume.hpp"
#include "svtrack/watershed.hpp"

namespace svtrack {

/// Ordered `key = value` entries. `#` starts a comment, `[section]` prefixes
/// the following keys with `section.`, and keys may repeat.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, const std::string& source = "<input>");
  static KeyValueFile load(const std::filesystem::path& path);

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  /// Last value for `key`.
  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
  [[nodiscard]] std::vector<std::string> get_all(const std::string& key) const;
  [[nodiscard]] const std::string& source() const { return source_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::string source_;
};

/// Whitespace- or comma-separated numbers; throws ConfigError naming `what`.
std::vector<double> parse_numbers(const std::string& text, const std::string& what);
double parse_number(const std::string& text, const std::string& what);
long long parse_integer(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);

/// Every tunable of the segment / track / evaluate stages.
struct PipelineConfig {
  Spacing spacing{0.09, 0.09, 1.0};  // used when a TIFF carries no spacing
  Connectivity conn = Connectivity::Face6;

  std::vector<double> blob_radii{1.5, 2.5};  // microns
  double seed_min_score = 0.3;
  double seed_min_separation = 2.0;  // microns
  std::string probability_dir;       // external probability maps, t%03d.tif

  // The blob detector's map is peaked; 0.5 keeps only nucleus cores.
  WatershedConfig watershed{.mask_threshold = 0.25};
  SlicConfig slic;
  bool correction_enabled = true;

  TrackerConfig tracker;
  AogmCosts aogm;

  int threads = 1;
  std::uint64_t seed = 0;
  bool keep_intermediates = false;
};

/// Unknown keys and malformed values raise ConfigError.
PipelineConfig config_from(const KeyValueFile& kv);
PipelineConfig load_config(const std::filesystem::path& path);

/// Fully resolved configuration in the same key = value format.
std::string to_text(const PipelineConfig& cfg);

}  // namespace svtrack
