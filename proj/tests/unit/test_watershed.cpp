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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "svtrack/detection.hpp"
#include "svtrack/error.hpp"
#include "svtrack/morphology.hpp"
#include "svtrack/synth.hpp"
#include "svtrack/watershed.hpp"

using namespace svtrack;

namespace {

Seed seed_at(int x, int y, int z, float score = 1.0f) { return {{x, y, z}, score}; }

// Checks foreground preservation, one seed per region and region
// connectivity.
void expect_invariants(const Volume& prob, const SeedSet& seeds, const WatershedConfig& cfg,
                       const LabelVolume& out) {
  for (std::size_t i = 0; i < prob.size(); ++i) {
    ASSERT_EQ(out[i] != 0, prob[i] >= cfg.mask_threshold) << "voxel " << i;
  }
  std::map<Label, int> seeds_in;
  for (const Seed& s : seeds) {
    const Label l = out(s.position.x, s.position.y, s.position.z);
    if (l != 0) ++seeds_in[l];
  }
  for (const auto& [l, n] : seeds_in) EXPECT_EQ(n, 1) << "label " << l;
  // Labels without an input seed are exactly the seedless foreground
  // components, each seeded internally once.
  Mask fg = Mask::like(prob);
  for (std::size_t i = 0; i < prob.size(); ++i) fg[i] = prob[i] >= cfg.mask_threshold ? 1 : 0;
  const Components comps = connected_components(fg, cfg.conn);
  std::set<Label> seeded_comps;
  for (const Seed& s : seeds) {
    const Label c = comps.labels(s.position.x, s.position.y, s.position.z);
    if (c != 0) seeded_comps.insert(c);
  }
  EXPECT_EQ(region_sizes(out).size(), seeds_in.size() + (comps.count - seeded_comps.size()));
  EXPECT_TRUE(oracle::all_labels_connected(out, cfg.conn));
}

}  // namespace

TEST(Watershed, OneSeedBall) {
  Volume p(Dims{11, 11, 11});
  for (int z = 0; z < 11; ++z) {
    for (int y = 0; y < 11; ++y) {
      for (int x = 0; x < 11; ++x) {
        const int d2 = (x - 5) * (x - 5) + (y - 5) * (y - 5) + (z - 5) * (z - 5);
        p(x, y, z) = d2 <= 16 ? 0.9f : 0.0f;
      }
    }
  }
  const LabelVolume out = watershed(p, {seed_at(5, 5, 5)});
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(out[i], p[i] > 0 ? 1u : 0u);
}

TEST(Watershed, DisjointBlobsEachOwnLabel) {
  Volume p(Dims{20, 8, 8});
  LabelVolume truth(p.dims());
  fixture::paint_box(truth, {1, 1, 1}, {6, 6, 6}, 1);
  fixture::paint_box(truth, {11, 2, 2}, {18, 5, 5}, 2);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = truth[i] ? 0.8f : 0.1f;
  const SeedSet seeds{seed_at(3, 3, 3), seed_at(15, 3, 3)};
  const LabelVolume out = watershed(p, seeds);
  EXPECT_EQ(out, truth);
}

TEST(Watershed, DumbbellSplitsAtNeck) {
  Volume p(Dims{31, 9, 9});
  for (int z = 0; z < 9; ++z) {
    for (int y = 0; y < 9; ++y) {
      for (int x = 0; x < 31; ++x) {
        const bool inside = (y - 4) * (y - 4) + (z - 4) * (z - 4) <= 16;
        p(x, y, z) = inside ? static_cast<float>(0.6 + 0.4 * std::abs(x - 15) / 15.0) : 0.0f;
      }
    }
  }
  const LabelVolume out = watershed(p, {seed_at(2, 4, 4), seed_at(28, 4, 4)});
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    const Index3 c = p.coord(i);
    if (c.x < 14) {
      EXPECT_EQ(out[i], 1u);
    }
    if (c.x > 16) {
      EXPECT_EQ(out[i], 2u);
    }
  }
  expect_invariants(p, {seed_at(2, 4, 4), seed_at(28, 4, 4)}, {}, out);
}

TEST(Watershed, NoSeedsInForegroundThrows) {
  Volume p(Dims{4, 4, 4}, Spacing{}, 0.2f);
  EXPECT_THROW(watershed(p, {seed_at(1, 1, 1)}), AlgorithmError);
  EXPECT_THROW(watershed(p, {}), AlgorithmError);
}

TEST(Watershed, BackgroundSeedDroppedLabelsConsecutive) {
  Volume p(Dims{12, 4, 4}, Spacing{}, 0.0f);
  for (int x = 0; x < 4; ++x) p(x, 1, 1) = 0.9f;
  for (int x = 8; x < 12; ++x) p(x, 1, 1) = 0.9f;
  const LabelVolume out = watershed(p, {seed_at(6, 1, 1), seed_at(1, 1, 1), seed_at(9, 1, 1)});
  std::set<Label> labels(out.data().begin(), out.data().end());
  EXPECT_EQ(labels, (std::set<Label>{0, 1, 2}));
}

TEST(Watershed, UnseededComponentsFollowConfig) {
  Volume p(Dims{12, 3, 3}, Spacing{}, 0.0f);
  for (int x = 0; x < 4; ++x) p(x, 1, 1) = 0.9f;
  for (int x = 8; x < 12; ++x) p(x, 1, 1) = 0.7f;
  WatershedConfig cfg;
  const LabelVolume all = watershed(p, {seed_at(1, 1, 1)}, cfg);
  EXPECT_EQ(all(10, 1, 1), 2u);
  cfg.label_unseeded_components = false;
  const LabelVolume seeded = watershed(p, {seed_at(1, 1, 1)}, cfg);
  EXPECT_EQ(seeded(10, 1, 1), 0u);
  EXPECT_EQ(seeded(2, 1, 1), 1u);
}

TEST(Watershed, ConfigValidation) {
  WatershedConfig cfg;
  cfg.level_quantization = 1;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg = {};
  cfg.mask_threshold = 1.2;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  EXPECT_THROW(watershed(Volume(Dims{2, 2, 2}, Spacing{}, 2.0f), {seed_at(0, 0, 0)}),
               std::invalid_argument);
}

TEST(Watershed, InvariantsOnSyntheticFrames) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SynthSequence seq = generate_sequence(fixture::crowded_script(seed));
    const Volume p = blob_probability_map(normalize_min_max(seq.intensity[0]), {1.5, 2.5});
    for (Connectivity conn : {Connectivity::Face6, Connectivity::Full26}) {
      WatershedConfig cfg;
      cfg.conn = conn;
      cfg.mask_threshold = 0.25;
      const SeedSet seeds = extract_seeds(p, 0.3, 2.0);
      ASSERT_FALSE(seeds.empty());
      expect_invariants(p, seeds, cfg, watershed(p, seeds, cfg));
    }
  }
}

TEST(Watershed, DeterministicAndQuantizationOnlyBucketsTies) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  Volume p(Dims{12, 10, 6});
  for (float& v : p.data()) v = u(rng);
  const SeedSet seeds = extract_seeds(p, 0.6, 2.0);
  WatershedConfig cfg;
  EXPECT_EQ(watershed(p, seeds, cfg), watershed(p, seeds, cfg));
  for (int levels : {2, 16, 1024}) {
    cfg.level_quantization = levels;
    expect_invariants(p, seeds, cfg, watershed(p, seeds, cfg));
  }
}
