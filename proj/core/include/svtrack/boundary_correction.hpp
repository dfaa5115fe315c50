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
#include <utility>
#include <vector>

#include "svtrack/volume.hpp"

namespace svtrack {

/// Sparse overlap counts K[i][j] = |C^s_i ∩ C^w_j| between supervoxel i and
/// watershed region j (j = 0 is background). Zero entries are not stored.
class CorrelationTable {
 public:
  using Row = std::vector<std::pair<Label, std::uint64_t>>;  // ascending j

  /// K_ij, or 0 when absent.
  [[nodiscard]] std::uint64_t at(Label supervoxel, Label region) const;
  [[nodiscard]] const Row& row(Label supervoxel) const;
  [[nodiscard]] const std::map<Label, Row>& rows() const { return rows_; }
  [[nodiscard]] std::size_t nonzero_count() const;

  void add(Label supervoxel, Label region, std::uint64_t count);

  friend bool operator==(const CorrelationTable&, const CorrelationTable&) = default;

 private:
  std::map<Label, Row> rows_;
};

/// Exact voxel-count intersections of every supervoxel with every watershed
/// region (background included). Throws std::invalid_argument on a dims
/// mismatch.
CorrelationTable cluster_correlation(const LabelVolume& supervoxels,
                                     const LabelVolume& watershed);

/// Region j* = argmax_j K_ij for one supervoxel row. A tie that involves the
/// background resolves to background; otherwise the lower region id wins.
Label best_region(const CorrelationTable::Row& row);

/// Relabels every supervoxel wholesale to its best region, so the result is a
/// union of intact supervoxels carrying watershed ids.
LabelVolume correct_boundaries(const LabelVolume& supervoxels,
                               const LabelVolume& watershed,
                               const CorrelationTable& table);

/// Convenience: correlation + correction in one call.
LabelVolume correct_boundaries(const LabelVolume& supervoxels, const LabelVolume& watershed);

/// Watershed regions that won no supervoxel and so vanish after correction.
std::vector<Label> dropped_regions(const LabelVolume& watershed, const LabelVolume& corrected);

}  // namespace svtrack
