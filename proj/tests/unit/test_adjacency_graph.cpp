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

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "svtrack/adjacency_graph.hpp"
#include "svtrack/morphology.hpp"

using namespace svtrack;

namespace {

// Bars along x on one row: [x0, x1] per label.
LabelVolume bars(int nx, const std::vector<std::pair<int, int>>& spans) {
  LabelVolume v(Dims{nx, 1, 1});
  Label l = 1;
  for (const auto& [a, b] : spans) {
    for (int x = a; x <= b; ++x) v(x, 0, 0) = l;
    ++l;
  }
  return v;
}

}  // namespace

TEST(DilationDistance, TouchingIsOne) {
  EXPECT_EQ(min_dilation_distance(bars(6, {{0, 2}, {3, 5}}), 1, 2, 5), 1);
}

TEST(DilationDistance, OneVoxelGapIsOne) {
  EXPECT_EQ(min_dilation_distance(bars(7, {{0, 2}, {4, 6}}), 1, 2, 5), 1);
}

TEST(DilationDistance, ThreeVoxelGapIsTwo) {
  EXPECT_EQ(min_dilation_distance(bars(9, {{0, 2}, {6, 8}}), 1, 2, 5), 2);
}

TEST(DilationDistance, BeyondCapIsNone) {
  const int R = 3;
  EXPECT_EQ(min_dilation_distance(bars(20, {{0, 1}, {2 * R + 3, 19}}), 1, 2, R), std::nullopt);
}

TEST(DilationDistance, Errors) {
  const LabelVolume v = bars(6, {{0, 1}, {4, 5}});
  EXPECT_THROW(min_dilation_distance(v, 1, 7, 3), std::out_of_range);
  EXPECT_THROW(min_dilation_distance(v, 1, 1, 3), std::invalid_argument);
  EXPECT_THROW(min_dilation_distance(v, 1, 2, 0), std::invalid_argument);
}

TEST(BuildGraph, SingleNucleus) {
  const NucleiGraph g = build_graph(bars(5, {{1, 3}}), 4);
  EXPECT_EQ(g.vertices(), (std::vector<Label>{1}));
  EXPECT_TRUE(g.edges().empty());
}

TEST(BuildGraph, CollinearTriple) {
  // Gaps of two empty voxels; the outer pair is six voxels apart and needs
  // three dilations, which is still within R = 3.
  const LabelVolume v = bars(12, {{0, 1}, {4, 5}, {8, 9}});
  const NucleiGraph g = build_graph(v, 3);
  EXPECT_EQ(g.weight(1, 2), 1);
  EXPECT_EQ(g.weight(2, 3), 1);
  EXPECT_EQ(g.weight(1, 3), 3);
  // A wider middle nucleus pushes the outer pair beyond the cap.
  const NucleiGraph h = build_graph(bars(13, {{0, 1}, {4, 6}, {9, 10}}), 3);
  EXPECT_EQ(h.edges().size(), 2u);
  EXPECT_EQ(h.weight(1, 2), 1);
  EXPECT_EQ(h.weight(2, 3), 1);
  EXPECT_EQ(h.weight(1, 3), std::nullopt);
}

TEST(BuildGraph, MatchesPairwiseAndWholeVolumeOracles) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    const LabelVolume v = fixture::random_boxes(Dims{14, 12, 6}, 7, 4, rng);
    for (Connectivity conn : {Connectivity::Face6, Connectivity::Full26}) {
      const int R = 4;
      const NucleiGraph g = build_graph(v, R, conn);
      const auto ids = g.vertices();
      EXPECT_EQ(ids.size(), region_sizes(v).size());
      for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
          const auto w = min_dilation_distance(v, ids[a], ids[b], R, conn);
          EXPECT_EQ(g.weight(ids[a], ids[b]), w);
          EXPECT_EQ(g.weight(ids[b], ids[a]), w);
          EXPECT_EQ(oracle::dilation_distance(v, ids[a], ids[b], R, conn), w);
        }
      }
    }
  }
}

TEST(BuildGraph, DisconnectedNucleusFallsBackToDefinition) {
  // Label 1 has two pieces; label 2 sits next to one of them.
  LabelVolume v = bars(16, {{0, 1}, {5, 6}});
  v(12, 0, 0) = 1;
  const NucleiGraph g = build_graph(v, 5);
  EXPECT_EQ(g.weight(1, 2), oracle::dilation_distance(v, 1, 2, 5, Connectivity::Face6));
  EXPECT_EQ(g.weight(1, 2), min_dilation_distance(v, 1, 2, 5));
}

TEST(BuildGraph, IncreasingRadiusOnlyAddsEdges) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const LabelVolume v = fixture::random_boxes(Dims{16, 14, 5}, 8, 4, rng);
    NucleiGraph prev = build_graph(v, 1);
    for (int R = 2; R <= 6; ++R) {
      const NucleiGraph g = build_graph(v, R);
      for (const auto& [e, w] : prev.edges()) EXPECT_EQ(g.weight(e.first, e.second), w);
      for (const auto& [e, w] : g.edges()) {
        EXPECT_GE(w, 1);
        EXPECT_LE(w, R);
      }
      prev = g;
    }
  }
}

TEST(NucleiGraphType, EdgeRules) {
  NucleiGraph g({1, 2, 3}, 5);
  g.add_edge(2, 1, 3);
  EXPECT_EQ(g.weight(1, 2), 3);
  EXPECT_EQ(g.degree(1), 1);
  EXPECT_EQ(g.degree(3), 0);
  EXPECT_THROW(g.add_edge(1, 1, 1), std::invalid_argument);
  EXPECT_THROW(g.add_edge(1, 3, 0), std::invalid_argument);
  EXPECT_THROW(g.add_edge(1, 9, 1), std::out_of_range);
}

TEST(GraphText, RoundTrip) {
  std::mt19937_64 rng(10);
  const LabelVolume v = fixture::random_boxes(Dims{12, 12, 4}, 6, 4, rng);
  const NucleiGraph g = build_graph(v, 4);
  std::stringstream s;
  write_graph(g, s);
  EXPECT_EQ(read_graph(s), g);
}

TEST(GraphText, Format) {
  NucleiGraph g({1, 2, 4}, 3);
  g.add_edge(4, 2, 2);
  std::ostringstream s;
  write_graph(g, s);
  EXPECT_EQ(s.str(), "radius 3\nvertices 1 2 4\n2 4 2\n");
}
