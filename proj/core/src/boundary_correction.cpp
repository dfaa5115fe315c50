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

#include "svtrack/boundary_correction.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "svtrack/morphology.hpp"

namespace svtrack {

std::uint64_t CorrelationTable::at(Label supervoxel, Label region) const {
  auto it = rows_.find(supervoxel);
  if (it == rows_.end()) return 0;
  auto e = std::lower_bound(it->second.begin(), it->second.end(), region,
                            [](const auto& entry, Label r) { return entry.first < r; });
  return e != it->second.end() && e->first == region ? e->second : 0;
}

const CorrelationTable::Row& CorrelationTable::row(Label supervoxel) const {
  static const Row empty;
  auto it = rows_.find(supervoxel);
  return it == rows_.end() ? empty : it->second;
}

std::size_t CorrelationTable::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& [i, r] : rows_) n += r.size();
  return n;
}

void CorrelationTable::add(Label supervoxel, Label region, std::uint64_t count) {
  if (count == 0) return;
  Row& r = rows_[supervoxel];
  auto e = std::lower_bound(r.begin(), r.end(), region,
                            [](const auto& entry, Label x) { return entry.first < x; });
  if (e != r.end() && e->first == region) {
    e->second += count;
  } else {
    r.insert(e, {region, count});
  }
}

CorrelationTable cluster_correlation(const LabelVolume& supervoxels,
                                     const LabelVolume& watershed) {
  if (supervoxels.dims() != watershed.dims()) {
    throw std::invalid_argument("cluster_correlation: dims mismatch " +
                                to_string(supervoxels.dims()) + " vs " +
                                to_string(watershed.dims()));
  }
  std::unordered_map<std::uint64_t, std::uint64_t> tally;
  for (std::size_t v = 0; v < supervoxels.size(); ++v) {
    ++tally[(static_cast<std::uint64_t>(supervoxels[v]) << 32) | watershed[v]];
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(tally.begin(), tally.end());
  std::sort(sorted.begin(), sorted.end());
  CorrelationTable table;
  for (const auto& [key, count] : sorted) {
    table.add(static_cast<Label>(key >> 32), static_cast<Label>(key & 0xffffffffu), count);
  }
  return table;
}

Label best_region(const CorrelationTable::Row& row) {
  Label best = 0;
  std::uint64_t best_count = 0;
  bool have = false;
  // Rows are sorted by region id with background first, so a strict '>'
  // keeps the background on ties and otherwise the lower id.
  for (const auto& [region, count] : row) {
    if (!have || count > best_count) {
      best = region;
      best_count = count;
      have = true;
    }
  }
  return best;
}

LabelVolume correct_boundaries(const LabelVolume& supervoxels,
                               const LabelVolume& watershed,
                               const CorrelationTable& table) {
  if (supervoxels.dims() != watershed.dims()) {
    throw std::invalid_argument("correct_boundaries: dims mismatch");
  }
  std::unordered_map<Label, Label> winner;
  winner.reserve(table.rows().size());
  for (const auto& [sv, row] : table.rows()) winner.emplace(sv, best_region(row));

  LabelVolume out = LabelVolume::like(watershed);
  for (std::size_t v = 0; v < supervoxels.size(); ++v) {
    auto it = winner.find(supervoxels[v]);
    out[v] = it == winner.end() ? 0 : it->second;
  }
  const auto dropped = dropped_regions(watershed, out);
  if (!dropped.empty()) {
    spdlog::info("boundary correction: {} watershed nucleus/nuclei won no supervoxel and were "
                 "dropped", dropped.size());
  }
  return out;
}

LabelVolume correct_boundaries(const LabelVolume& supervoxels, const LabelVolume& watershed) {
  return correct_boundaries(supervoxels, watershed, cluster_correlation(supervoxels, watershed));
}

std::vector<Label> dropped_regions(const LabelVolume& watershed, const LabelVolume& corrected) {
  const auto kept = region_sizes(corrected);
  std::vector<Label> dropped;
  for (const auto& [label, n] : region_sizes(watershed)) {
    if (!kept.contains(label)) dropped.push_back(label);
  }
  return dropped;
}

}  // namespace svtrack
