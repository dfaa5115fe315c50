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

#include "svtrack/tracker.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "svtrack/morphology.hpp"

namespace svtrack {
namespace {

double relative_change(double ref, double next) {
  if (ref == 0.0) return next == 0.0 ? 0.0 : 1.0;
  return std::abs(ref - next) / ref;
}

// Overlap (voxel count) of the dilated nucleus `label` of `prev` with each
// label of `cur`.
std::map<Label, std::uint64_t> dilated_overlap(const LabelVolume& prev, Label label,
                                               const Box& box, const LabelVolume& cur,
                                               int radius, Connectivity conn) {
  const Dims d = prev.dims();
  const Box crop{{std::max(0, box.lo.x - radius), std::max(0, box.lo.y - radius),
                  std::max(0, box.lo.z - radius)},
                 {std::min(d.nx - 1, box.hi.x + radius), std::min(d.ny - 1, box.hi.y + radius),
                  std::min(d.nz - 1, box.hi.z + radius)}};
  const Dims cd{crop.hi.x - crop.lo.x + 1, crop.hi.y - crop.lo.y + 1, crop.hi.z - crop.lo.z + 1};
  Mask m(cd, prev.spacing());
  for (int z = 0; z < cd.nz; ++z)
    for (int y = 0; y < cd.ny; ++y)
      for (int x = 0; x < cd.nx; ++x)
        m(x, y, z) = prev(x + crop.lo.x, y + crop.lo.y, z + crop.lo.z) == label ? 1 : 0;
  if (radius > 0) m = dilate_binary(m, conn, radius);
  std::map<Label, std::uint64_t> overlap;
  for (int z = 0; z < cd.nz; ++z)
    for (int y = 0; y < cd.ny; ++y)
      for (int x = 0; x < cd.nx; ++x) {
        if (!m(x, y, z)) continue;
        const Label l = cur(x + crop.lo.x, y + crop.lo.y, z + crop.lo.z);
        if (l != 0) ++overlap[l];
      }
  return overlap;
}

}  // namespace

std::vector<TrackFeature> compute_features(const LabelVolume& seg, const NucleiGraph& graph) {
  const auto sizes = region_sizes(seg);
  const double voxel_volume = seg.spacing().voxel_volume();
  std::vector<TrackFeature> out;
  out.reserve(sizes.size());
  for (const auto& [label, count] : sizes) {
    TrackFeature f;
    f.label = label;
    f.volume = static_cast<double>(count) * voxel_volume;
    const auto nbrs = graph.neighbors(label);
    f.degree = static_cast<int>(nbrs.size());
    if (f.degree > 0) {
      double sum = 0.0;
      for (const auto& [other, w] : nbrs) sum += w;
      f.mean_weight = sum / f.degree;
    }
    out.push_back(f);
  }
  return out;
}

double similarity(const TrackFeature& ref, const TrackFeature& next) {
  return relative_change(ref.volume, next.volume) +
         relative_change(static_cast<double>(ref.degree), static_cast<double>(next.degree)) +
         relative_change(ref.mean_weight, next.mean_weight);
}

std::vector<Link> link_frames(const std::vector<TrackFeature>& current,
                              const std::vector<TrackFeature>& next, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("link threshold must be positive");
  // Candidates are grouped per current nucleus and each row is a min-heap on
  // (score, to), popped lazily. A heap over the row heads then yields
  // candidates in global (score, from, to) order; heads whose target is
  // already taken are discarded. Building is linear in the pair count.
  struct Candidate {
    double score;
    Label to;
    std::uint32_t j;  // position in `next`
  };
  auto row_after = [](const Candidate& x, const Candidate& y) {
    return x.score != y.score ? x.score > y.score : x.to > y.to;
  };
  std::vector<Candidate> flat;
  flat.reserve(current.size() * next.size());
  std::vector<std::size_t> row_begin(current.size() + 1, 0);
  for (std::size_t i = 0; i < current.size(); ++i) {
    for (std::size_t j = 0; j < next.size(); ++j) {
      const double s = similarity(current[i], next[j]);
      if (s < threshold) flat.push_back({s, next[j].label, static_cast<std::uint32_t>(j)});
    }
    row_begin[i + 1] = flat.size();
    std::make_heap(flat.begin() + static_cast<std::ptrdiff_t>(row_begin[i]), flat.end(),
                   row_after);
  }
  std::vector<std::size_t> row_end(row_begin.begin() + 1, row_begin.end());
  auto drop_head = [&](std::size_t r) {
    std::pop_heap(flat.begin() + static_cast<std::ptrdiff_t>(row_begin[r]),
                  flat.begin() + static_cast<std::ptrdiff_t>(row_end[r]), row_after);
    --row_end[r];
  };
  auto after = [&](std::size_t r, std::size_t q) {
    const Candidate& x = flat[row_begin[r]];
    const Candidate& y = flat[row_begin[q]];
    if (x.score != y.score) return x.score > y.score;
    if (current[r].label != current[q].label) return current[r].label > current[q].label;
    return x.to > y.to;
  };
  std::vector<std::size_t> heap;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (row_begin[i] != row_begin[i + 1]) heap.push_back(i);
  }
  std::make_heap(heap.begin(), heap.end(), after);
  std::vector<char> used_to(next.size(), 0);
  std::vector<Link> links;
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), after);
    const std::size_t r = heap.back();
    const Candidate& c = flat[row_begin[r]];
    if (!used_to[c.j]) {
      used_to[c.j] = 1;
      links.push_back({current[r].label, c.to, c.score});
      heap.pop_back();
      continue;
    }
    // Advance past targets that are already linked.
    while (row_end[r] > row_begin[r] && used_to[flat[row_begin[r]].j]) drop_head(r);
    if (row_end[r] == row_begin[r]) {
      heap.pop_back();
    } else {
      std::push_heap(heap.begin(), heap.end(), after);
    }
  }
  return links;
}

void validate(const TrackerConfig& cfg) {
  if (cfg.max_radius < 1) throw std::invalid_argument("tracker max_radius must be >= 1");
  if (!(cfg.threshold > 0.0)) throw std::invalid_argument("tracker threshold must be positive");
}

TrackingResult track_sequence(const std::vector<LabelVolume>& frames, const TrackerConfig& cfg) {
  validate(cfg);
  if (frames.empty()) throw std::invalid_argument("track_sequence needs at least one frame");
  const int division_radius = cfg.division_radius < 0 ? cfg.max_radius : cfg.division_radius;

  TrackingResult result;
  auto& tracks = result.lineage.tracks;
  auto features_of = [&](const LabelVolume& seg) {
    return compute_features(seg, build_graph(seg, cfg.max_radius, cfg.conn));
  };
  auto open_track = [&](int t) {
    const Label id = static_cast<Label>(tracks.size() + 1);
    tracks.push_back({id, t, t, 0});
    return id;
  };

  std::vector<TrackFeature> prev = features_of(frames[0]);
  std::map<Label, Label> prev_track;  // frame label -> track id
  for (const TrackFeature& f : prev) prev_track[f.label] = open_track(0);
  std::vector<std::map<Label, Label>> label_to_track{prev_track};

  for (std::size_t t = 1; t < frames.size(); ++t) {
    const int frame = static_cast<int>(t);
    std::vector<TrackFeature> cur = features_of(frames[t]);
    const auto links = link_frames(prev, cur, cfg.threshold);

    std::map<Label, Label> cur_track;
    std::map<Label, bool> linked_prev;
    for (const Link& l : links) {
      const Label id = prev_track.at(l.from);
      cur_track[l.to] = id;
      tracks[id - 1].end = frame;
      linked_prev[l.from] = true;
    }
    std::vector<Label> fresh;
    for (const TrackFeature& f : cur) {
      if (!cur_track.contains(f.label)) {
        cur_track[f.label] = open_track(frame);
        fresh.push_back(f.label);
      }
    }

    if (!fresh.empty()) {
      // Daughter attribution: each new nucleus picks the ended track whose
      // dilated region it overlaps most (lower track id on ties).
      std::map<Label, std::pair<std::uint64_t, Label>> best_parent;  // new label -> (overlap, track)
      const auto boxes = region_boxes(frames[t - 1]);
      for (const auto& [label, id] : prev_track) {
        if (linked_prev.contains(label)) continue;
        const auto overlap = dilated_overlap(frames[t - 1], label, boxes.at(label), frames[t],
                                             division_radius, cfg.conn);
        for (Label n : fresh) {
          auto it = overlap.find(n);
          if (it == overlap.end()) continue;
          auto [bp, inserted] = best_parent.try_emplace(n, it->second, id);
          if (!inserted && (it->second > bp->second.first ||
                            (it->second == bp->second.first && id < bp->second.second))) {
            bp->second = {it->second, id};
          }
        }
      }
      std::map<Label, std::vector<Label>> daughters;  // parent track -> daughter tracks
      for (const auto& [n, choice] : best_parent) daughters[choice.second].push_back(cur_track[n]);
      for (const auto& [parent, kids] : daughters) {
        if (kids.size() < 2) continue;
        for (Label kid : kids) tracks[kid - 1].parent = parent;
        spdlog::debug("frame {}: track {} divided into {} daughters", frame, parent, kids.size());
      }
    }

    prev = std::move(cur);
    prev_track = cur_track;
    label_to_track.push_back(std::move(cur_track));
  }

  result.tracked.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    LabelVolume relabeled = frames[t];
    const auto& lut = label_to_track[t];
    for (Label& l : relabeled.data()) {
      if (l != 0) l = lut.at(l);
    }
    result.tracked.push_back(std::move(relabeled));
  }
  return result;
}

}  // namespace svtrack
