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

#include "svtrack/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "svtrack/morphology.hpp"

namespace svtrack {
namespace {

void check_frames(const std::vector<LabelVolume>& result, const std::vector<LabelVolume>& truth) {
  if (result.size() != truth.size()) {
    throw std::invalid_argument("result has " + std::to_string(result.size()) +
                                " frames but truth has " + std::to_string(truth.size()));
  }
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (result[t].dims() != truth[t].dims()) {
      throw std::invalid_argument("frame " + std::to_string(t) + " dims mismatch: result " +
                                  to_string(result[t].dims()) + " vs truth " +
                                  to_string(truth[t].dims()));
    }
  }
}

struct FrameMatch {
  std::map<Label, std::uint64_t> truth_size;
  std::map<Label, std::uint64_t> result_size;
  std::map<Label, Label> truth_to_result;             // only matched truth regions
  std::map<Label, std::vector<Label>> result_to_truth;  // every result region, maybe empty
  std::map<std::pair<Label, Label>, std::uint64_t> overlap;
};

// Strict-majority matching of truth regions to result regions in one frame.
FrameMatch match_frame(const LabelVolume& result, const LabelVolume& truth) {
  FrameMatch m;
  for (std::size_t v = 0; v < truth.size(); ++v) {
    const Label r = truth[v], s = result[v];
    if (r != 0) ++m.truth_size[r];
    if (s != 0) ++m.result_size[s];
    if (r != 0 && s != 0) ++m.overlap[{r, s}];
  }
  for (const auto& [s, n] : m.result_size) m.result_to_truth[s];
  for (const auto& [key, n] : m.overlap) {
    const auto [r, s] = key;
    if (2 * n <= m.truth_size.at(r)) continue;
    if (!m.truth_to_result.emplace(r, s).second) {
      throw std::logic_error("strict-majority matching produced two partners for one region");
    }
    m.result_to_truth[s].push_back(r);
  }
  return m;
}

struct NodeErrors {
  std::uint64_t splits = 0, fn = 0, fp = 0, truth_nodes = 0;
};

NodeErrors node_errors(const std::vector<FrameMatch>& matches) {
  NodeErrors e;
  for (const FrameMatch& m : matches) {
    e.truth_nodes += m.truth_size.size();
    e.fn += m.truth_size.size() - m.truth_to_result.size();
    for (const auto& [s, rs] : m.result_to_truth) {
      if (rs.empty()) {
        ++e.fp;
      } else {
        e.splits += rs.size() - 1;
      }
    }
  }
  return e;
}

double score_from(const AogmBreakdown& b) {
  if (!(b.empty_cost > 0.0)) {
    throw std::invalid_argument("ground truth is empty; the score is undefined");
  }
  return 1.0 - std::min(b.cost, b.empty_cost) / b.empty_cost;
}

enum class EdgeKind { Link, Division };

struct Edge {
  int t0;
  Label a;
  int t1;
  Label b;
  auto operator<=>(const Edge&) const = default;
};

// Temporal edges of a lineage graph, checked against its masks.
std::map<Edge, EdgeKind> lineage_edges(const LineageTable& lineage,
                                       const std::vector<LabelVolume>& masks,
                                       const char* which) {
  const std::string who(which);
  std::vector<std::map<Label, std::uint64_t>> present;
  present.reserve(masks.size());
  for (const auto& m : masks) present.push_back(region_sizes(m));
  for (std::size_t t = 0; t < masks.size(); ++t) {
    for (const auto& [label, n] : present[t]) {
      const Track* tr = lineage.find(label);
      if (tr == nullptr || tr->begin > static_cast<int>(t) || tr->end < static_cast<int>(t)) {
        throw std::invalid_argument(who + " mask label " + std::to_string(label) + " in frame " +
                                    std::to_string(t) + " is not a live track in the lineage");
      }
    }
  }
  std::map<Edge, EdgeKind> edges;
  for (const Track& tr : lineage.tracks) {
    if (tr.end >= static_cast<int>(masks.size())) {
      throw std::invalid_argument(who + " track " + std::to_string(tr.id) +
                                  " extends past the last frame");
    }
    for (int t = tr.begin; t <= tr.end; ++t) {
      if (!present[static_cast<std::size_t>(t)].contains(tr.id)) {
        throw std::invalid_argument(who + " track " + std::to_string(tr.id) +
                                    " is missing from frame " + std::to_string(t));
      }
      if (t < tr.end) edges[{t, tr.id, t + 1, tr.id}] = EdgeKind::Link;
    }
    if (tr.parent != 0) {
      const Track* p = lineage.find(tr.parent);
      if (p == nullptr) {
        throw std::invalid_argument(who + " track " + std::to_string(tr.id) +
                                    " has unknown parent " + std::to_string(tr.parent));
      }
      edges[{p->end, p->id, tr.begin, tr.id}] = EdgeKind::Division;
    }
  }
  return edges;
}

}  // namespace

void AogmCosts::validate() const {
  for (double w : {ns, fn, fp, ed, ea, ec}) {
    if (!(w >= 0.0)) throw std::invalid_argument("AOGM weights must be nonnegative");
  }
}

double seg_score(const std::vector<LabelVolume>& result, const std::vector<LabelVolume>& truth) {
  check_frames(result, truth);
  double total = 0.0;
  std::uint64_t regions = 0;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    const FrameMatch m = match_frame(result[t], truth[t]);
    for (const auto& [r, size_r] : m.truth_size) {
      ++regions;
      auto it = m.truth_to_result.find(r);
      if (it == m.truth_to_result.end()) continue;
      const std::uint64_t inter = m.overlap.at({r, it->second});
      const std::uint64_t uni = size_r + m.result_size.at(it->second) - inter;
      total += static_cast<double>(inter) / static_cast<double>(uni);
    }
  }
  if (regions == 0) throw std::invalid_argument("ground truth holds no regions; SEG is undefined");
  return total / static_cast<double>(regions);
}

AogmBreakdown detection_aogm(const std::vector<LabelVolume>& result,
                             const std::vector<LabelVolume>& truth, const AogmCosts& costs) {
  costs.validate();
  check_frames(result, truth);
  std::vector<FrameMatch> matches;
  for (std::size_t t = 0; t < truth.size(); ++t) matches.push_back(match_frame(result[t], truth[t]));
  const NodeErrors e = node_errors(matches);
  AogmBreakdown b;
  b.splits = e.splits;
  b.false_negatives = e.fn;
  b.false_positives = e.fp;
  b.truth_nodes = e.truth_nodes;
  b.cost = costs.ns * e.splits + costs.fn * e.fn + costs.fp * e.fp;
  b.empty_cost = costs.fn * e.truth_nodes;
  return b;
}

double det_score(const std::vector<LabelVolume>& result, const std::vector<LabelVolume>& truth,
                 const AogmCosts& costs) {
  return score_from(detection_aogm(result, truth, costs));
}

AogmBreakdown tracking_aogm(const LineageTable& result_lineage,
                            const std::vector<LabelVolume>& result_masks,
                            const LineageTable& truth_lineage,
                            const std::vector<LabelVolume>& truth_masks, const AogmCosts& costs) {
  costs.validate();
  check_frames(result_masks, truth_masks);
  const auto truth_edges = lineage_edges(truth_lineage, truth_masks, "truth");
  const auto result_edges = lineage_edges(result_lineage, result_masks, "result");

  std::vector<FrameMatch> matches;
  for (std::size_t t = 0; t < truth_masks.size(); ++t) {
    matches.push_back(match_frame(result_masks[t], truth_masks[t]));
  }
  const NodeErrors e = node_errors(matches);

  // A result edge u->v covers truth edge r1->r2 when r1 is matched to u and
  // r2 to v. Uncovering result edges are deleted, uncovered truth edges
  // added, and covered ones with the other kind change semantics.
  std::set<Edge> covered;
  std::uint64_t deleted = 0, changed = 0;
  for (const auto& [re, kind] : result_edges) {
    const auto& from = matches[static_cast<std::size_t>(re.t0)].result_to_truth;
    const auto& to = matches[static_cast<std::size_t>(re.t1)].result_to_truth;
    bool hit = false;
    auto fa = from.find(re.a);
    auto tb = to.find(re.b);
    if (fa != from.end() && tb != to.end()) {
      for (Label r1 : fa->second) {
        for (Label r2 : tb->second) {
          auto te = truth_edges.find({re.t0, r1, re.t1, r2});
          if (te == truth_edges.end()) continue;
          hit = true;
          covered.insert(te->first);
          if (te->second != kind) ++changed;
        }
      }
    }
    if (!hit) ++deleted;
  }

  AogmBreakdown b;
  b.splits = e.splits;
  b.false_negatives = e.fn;
  b.false_positives = e.fp;
  b.edges_deleted = deleted;
  b.edges_added = truth_edges.size() - covered.size();
  b.edges_changed = changed;
  b.truth_nodes = e.truth_nodes;
  b.truth_edges = truth_edges.size();
  b.cost = costs.ns * b.splits + costs.fn * b.false_negatives + costs.fp * b.false_positives +
           costs.ed * b.edges_deleted + costs.ea * b.edges_added + costs.ec * b.edges_changed;
  b.empty_cost = costs.fn * b.truth_nodes + costs.ea * b.truth_edges;
  return b;
}

double tra_score(const LineageTable& result_lineage, const std::vector<LabelVolume>& result_masks,
                 const LineageTable& truth_lineage, const std::vector<LabelVolume>& truth_masks,
                 const AogmCosts& costs) {
  return score_from(
      tracking_aogm(result_lineage, result_masks, truth_lineage, truth_masks, costs));
}

OpScores op_scores(double det, double seg, double tra) {
  for (double v : {det, seg, tra}) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("scores must lie in [0,1]");
  }
  return {(det + seg) / 2.0, (seg + tra) / 2.0};
}

std::string format_report(const Evaluation& e) {
  std::string out;
  char buf[128];
  auto line = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s=%.6f\n", key, v);
    out += buf;
  };
  auto count = [&](const char* key, std::uint64_t v) {
    std::snprintf(buf, sizeof buf, "%s=%llu\n", key, static_cast<unsigned long long>(v));
    out += buf;
  };
  line("DET", e.det);
  line("SEG", e.seg);
  line("TRA", e.tra);
  line("OP_CSB", e.op.csb);
  line("OP_CTB", e.op.ctb);
  line("weight.NS", e.costs.ns);
  line("weight.FN", e.costs.fn);
  line("weight.FP", e.costs.fp);
  line("weight.ED", e.costs.ed);
  line("weight.EA", e.costs.ea);
  line("weight.EC", e.costs.ec);
  line("AOGM-D", e.detection.cost);
  line("AOGM-D_0", e.detection.empty_cost);
  line("AOGM", e.tracking.cost);
  line("AOGM_0", e.tracking.empty_cost);
  count("count.NS", e.tracking.splits);
  count("count.FN", e.tracking.false_negatives);
  count("count.FP", e.tracking.false_positives);
  count("count.ED", e.tracking.edges_deleted);
  count("count.EA", e.tracking.edges_added);
  count("count.EC", e.tracking.edges_changed);
  return out;
}

std::string format_report_json(const Evaluation& e) {
  auto counts = [](const AogmBreakdown& b) {
    return nlohmann::ordered_json{{"NS", b.splits},
                                  {"FN", b.false_negatives},
                                  {"FP", b.false_positives},
                                  {"ED", b.edges_deleted},
                                  {"EA", b.edges_added},
                                  {"EC", b.edges_changed},
                                  {"truth_nodes", b.truth_nodes},
                                  {"truth_edges", b.truth_edges},
                                  {"cost", b.cost},
                                  {"empty_cost", b.empty_cost}};
  };
  nlohmann::ordered_json j;
  j["scores"] = {{"DET", e.det}, {"SEG", e.seg}, {"TRA", e.tra},
                 {"OP_CSB", e.op.csb}, {"OP_CTB", e.op.ctb}};
  j["weights"] = {{"NS", e.costs.ns}, {"FN", e.costs.fn}, {"FP", e.costs.fp},
                  {"ED", e.costs.ed}, {"EA", e.costs.ea}, {"EC", e.costs.ec}};
  j["detection"] = counts(e.detection);
  j["tracking"] = counts(e.tracking);
  return j.dump(2) + "\n";
}

}  // namespace svtrack
