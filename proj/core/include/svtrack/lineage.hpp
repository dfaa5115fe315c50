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

#include <optional>
#include <vector>

#include "svtrack/volume.hpp"

namespace svtrack {

/// One row of a CTC lineage file: `id begin end parent`.
struct Track {
  Label id = 0;
  int begin = 0;
  int end = 0;
  Label parent = 0;  // 0 = no parent

  friend bool operator==(const Track&, const Track&) = default;
};

struct LineageTable {
  std::vector<Track> tracks;

  [[nodiscard]] const Track* find(Label id) const;
  void sort_by_id();

  friend bool operator==(const LineageTable&, const LineageTable&) = default;
};

/// Checks id uniqueness/positivity, begin <= end, and that every parent
/// exists and ends strictly before its child begins. Throws
/// std::invalid_argument describing the first violation.
void validate_lineage(const LineageTable& table);

}  // namespace svtrack
