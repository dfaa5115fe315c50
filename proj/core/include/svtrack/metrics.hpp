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
#include <string>
#include <vector>

#include "svtrack/lineage.hpp"
#include "svtrack/volume.hpp"

namespace svtrack {

/// Per-operation weights of the acyclic oriented graph matching cost.
/// Defaults follow the Cell Tracking Challenge convention.
struct AogmCosts {
  double ns = 5.0;   // node split
  double fn = 10.0;  // false negative node (add)
  double fp = 1.0;   // false positive node (delete)
  double ed = 1.0;   // edge delete
  double ea = 1.5;   // edge add
  double ec = 1.0;   // edge semantics change

  void validate() const;
};

/// Raw operation counts and the resulting costs.
struct AogmBreakdown {
  std::uint64_t splits = 0;
  std::uint64_t false_negatives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t edges_deleted = 0;
  std::uint64_t edges_added = 0;
  std::uint64_t edges_changed = 0;
  std::uint64_t truth_nodes = 0;
  std::uint64_t truth_edges = 0;
  double cost = 0;        // AOGM (or AOGM-D)
  double empty_cost = 0;  // cost of building the truth graph from scratch
};

/// Mean Jaccard index over every truth region of every frame. A truth region
/// R is matched to the result region S with |R ∩ S| > 0.5 |R| (at most one
/// can qualify); unmatched regions score 0. Throws std::invalid_argument on
/// a frame-count or dims mismatch or when the truth holds no regions.
double seg_score(const std::vector<LabelVolume>& result, const std::vector<LabelVolume>& truth);

AogmBreakdown detection_aogm(const std::vector<LabelVolume>& result,
                             const std::vector<LabelVolume>& truth, const AogmCosts& costs = {});

/// DET = 1 - min(AOGM-D, AOGM-D_0) / AOGM-D_0.
double det_score(const std::vector<LabelVolume>& result, const std::vector<LabelVolume>& truth,
                 const AogmCosts& costs = {});

/// Masks must be labeled by track id. Throws std::invalid_argument when a
/// mask label is not a track alive in that frame, or a track is missing from
/// a frame inside its span.
AogmBreakdown tracking_aogm(const LineageTable& result_lineage,
                            const std::vector<LabelVolume>& result_masks,
                            const LineageTable& truth_lineage,
                            const std::vector<LabelVolume>& truth_masks,
                            const AogmCosts& costs = {});

/// TRA = 1 - min(AOGM, AOGM_0) / AOGM_0.
double tra_score(const LineageTable& result_lineage, const std::vector<LabelVolume>& result_masks,
                 const LineageTable& truth_lineage, const std::vector<LabelVolume>& truth_masks,
                 const AogmCosts& costs = {});

struct OpScores {
  double csb = 0;  // (DET + SEG) / 2
  double ctb = 0;  // (SEG + TRA) / 2
};

OpScores op_scores(double det, double seg, double tra);

struct Evaluation {
  double det = 0, seg = 0, tra = 0;
  OpScores op;
  AogmCosts costs;
  AogmBreakdown detection;
  AogmBreakdown tracking;
};

/// Flat `key=value` lines.
std::string format_report(const Evaluation& e);
/// Structured JSON with scores, weights and operation counts.
std::string format_report_json(const Evaluation& e);

}  // namespace svtrack
