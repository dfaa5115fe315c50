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

#include "svtrack/watershed.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "svtrack/error.hpp"
#include "svtrack/morphology.hpp"

namespace svtrack {
namespace {

struct Entry {
  int level;
  std::uint64_t seq;
  std::size_t voxel;
};

struct Lower {
  bool operator()(const Entry& a, const Entry& b) const {
    // priority_queue pops the "largest": highest level, then oldest.
    return std::tie(a.level, b.seq) < std::tie(b.level, a.seq);
  }
};

class Flooder {
 public:
  Flooder(const Volume& prob, const Mask& fg, LabelVolume& labels, const WatershedConfig& cfg)
      : prob_(prob), fg_(fg), labels_(labels), cfg_(cfg),
        offsets_(neighbor_offsets(cfg.conn)) {}

  void push_seed(std::size_t voxel, Label label) {
    labels_[voxel] = label;
    queue_.push({level(voxel), seq_++, voxel});
  }

  void run() {
    const Dims d = prob_.dims();
    while (!queue_.empty()) {
      const Entry e = queue_.top();
      queue_.pop();
      const Label label = labels_[e.voxel];
      const Index3 p = prob_.coord(e.voxel);
      for (const Offset& o : offsets_) {
        const int x = p.x + o.dx, y = p.y + o.dy, z = p.z + o.dz;
        if (x < 0 || y < 0 || z < 0 || x >= d.nx || y >= d.ny || z >= d.nz) continue;
        const std::size_t n = prob_.index(x, y, z);
        if (!fg_[n] || labels_[n] != 0) continue;
        labels_[n] = label;
        queue_.push({std::min(level(n), e.level), seq_++, n});
      }
    }
  }

 private:
  int level(std::size_t voxel) const {
    const double p = std::clamp(static_cast<double>(prob_[voxel]), 0.0, 1.0);
    return static_cast<int>(std::lround(p * (cfg_.level_quantization - 1)));
  }

  const Volume& prob_;
  const Mask& fg_;
  LabelVolume& labels_;
  const WatershedConfig& cfg_;
  std::span<const Offset> offsets_;
  std::priority_queue<Entry, std::vector<Entry>, Lower> queue_;
  std::uint64_t seq_ = 0;
};

}  // namespace

void validate(const WatershedConfig& cfg) {
  if (cfg.level_quantization < 2) {
    throw std::invalid_argument("watershed level_quantization must be >= 2");
  }
  if (!(cfg.mask_threshold >= 0.0 && cfg.mask_threshold <= 1.0)) {
    throw std::invalid_argument("watershed mask_threshold must lie in [0,1]");
  }
}

LabelVolume watershed(const Volume& prob, const SeedSet& seeds, const WatershedConfig& cfg) {
  validate(cfg);
  check_probability_range(prob);
  Mask fg = Mask::like(prob);
  for (std::size_t i = 0; i < prob.size(); ++i) {
    fg[i] = prob[i] >= cfg.mask_threshold ? 1 : 0;
  }

  LabelVolume labels = LabelVolume::like(prob);
  Flooder flood(prob, fg, labels, cfg);
  Label next = 0;
  std::size_t dropped = 0;
  for (const Seed& s : seeds) {
    const Index3& p = s.position;
    if (!prob.contains(p.x, p.y, p.z)) {
      ++dropped;
      continue;
    }
    const std::size_t v = prob.index(p);
    if (!fg[v] || labels[v] != 0) {
      ++dropped;
      continue;
    }
    flood.push_seed(v, ++next);
  }
  if (dropped > 0) {
    spdlog::warn("watershed: dropped {} seed(s) outside the foreground or duplicated", dropped);
  }
  if (next == 0) throw AlgorithmError("watershed: no detectable nuclei (no seed in foreground)");
  flood.run();

  if (!cfg.label_unseeded_components) return labels;

  Mask orphan = Mask::like(prob);
  bool any = false;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    orphan[i] = fg[i] && labels[i] == 0 ? 1 : 0;
    any = any || orphan[i];
  }
  if (!any) return labels;
  const Components comps = connected_components(orphan, cfg.conn);
  std::vector<std::size_t> peak(comps.count + 1, prob.size());
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const Label c = comps.labels[i];
    if (c == 0) continue;
    if (peak[c] == prob.size() || prob[i] > prob[peak[c]]) peak[c] = i;
  }
  for (Label c = 1; c <= comps.count; ++c) flood.push_seed(peak[c], ++next);
  flood.run();
  spdlog::info("watershed: {} unseeded foreground component(s) received their own label",
               comps.count);
  return labels;
}

}  // namespace svtrack
