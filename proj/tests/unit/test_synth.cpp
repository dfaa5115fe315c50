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

#include <sstream>

#include "fixtures.hpp"
#include "svtrack/ctc_io.hpp"
#include "svtrack/error.hpp"
#include "svtrack/metrics.hpp"
#include "svtrack/morphology.hpp"
#include "svtrack/synth.hpp"

using namespace svtrack;

namespace {

SynthScript parse(const std::string& text) {
  std::istringstream in(text);
  return parse_script(KeyValueFile::parse(in, "script"));
}

}  // namespace

TEST(Synth, StaticEllipsoidSingleTrack) {
  const SynthSequence s = generate_sequence(parse(
      "dims = 32 32 8\nspacing = 0.25 0.25 1\nframes = 3\nnucleus = a 4 4 4 1.5 1.5 2 0.8\n"));
  EXPECT_EQ(s.lineage, (LineageTable{{{1, 0, 2, 0}}}));
  ASSERT_EQ(s.truth.size(), 3u);
  EXPECT_EQ(s.truth[0], s.truth[2]);
  EXPECT_EQ(s.intensity[0](16, 16, 4), 0.8f);
  EXPECT_FLOAT_EQ(s.intensity[0](0, 0, 0), 0.1f);
}

TEST(Synth, DivisionGivesTwoChildren) {
  const SynthSequence s = generate_sequence(parse(
      "dims = 48 32 8\nspacing = 0.25 0.25 1\nframes = 4\n"
      "nucleus = a 6 4 4 2 1.5 2 0.8\n"
      "division = 2 a a1 a2 2 0 0\n"));
  const LineageTable expected{{{1, 0, 1, 0}, {2, 2, 3, 1}, {3, 2, 3, 1}}};
  EXPECT_EQ(s.lineage, expected);
  EXPECT_EQ(region_sizes(s.truth[2]).size(), 2u);
}

TEST(Synth, ApoptosisEndsTrack) {
  const SynthSequence s = generate_sequence(parse(
      "dims = 48 32 8\nspacing = 0.25 0.25 1\nframes = 4\n"
      "nucleus = a 3 4 4 1.5 1.5 2 0.8\nnucleus = b 8 4 4 1.5 1.5 2 0.8\napoptosis = 1 b\n"));
  EXPECT_EQ(s.lineage, (LineageTable{{{1, 0, 3, 0}, {2, 0, 0, 0}}}));
  EXPECT_EQ(region_sizes(s.truth[1]).size(), 1u);
}

TEST(Synth, DriftAndLateEntry) {
  const SynthSequence s = generate_sequence(parse(
      "dims = 48 32 8\nspacing = 0.25 0.25 1\nframes = 3\n"
      "nucleus = a 3 4 4 1.5 1.5 2 0.8 0.25 0 0\nnucleus = b 9 4 4 1 1 2 0.8 0 0 0 1\n"));
  EXPECT_EQ(s.lineage, (LineageTable{{{1, 0, 2, 0}, {2, 1, 2, 0}}}));
  EXPECT_EQ(s.truth[0](12, 16, 4), 1u);
  EXPECT_EQ(s.truth[1](13, 16, 4), 1u);
  EXPECT_EQ(s.truth[0](36, 16, 4), 0u);
  EXPECT_EQ(s.truth[1](36, 16, 4), 2u);
}

TEST(Synth, TruthAgainstItselfScoresOne) {
  const SynthSequence s = generate_sequence(fixture::tracking_script(3));
  EXPECT_EQ(seg_score(s.truth, s.truth), 1.0);
  EXPECT_EQ(det_score(s.truth, s.truth), 1.0);
  EXPECT_EQ(tra_score(s.lineage, s.truth, s.lineage, s.truth), 1.0);
}

TEST(Synth, Errors) {
  EXPECT_THROW(generate_sequence(parse("dims = 32 32 8\nspacing = 0.25 0.25 1\n"
                                       "nucleus = a 4 4 4 1.5 1.5 2 0.8\n"
                                       "nucleus = b 4.5 4 4 1.5 1.5 2 0.8\n")),
               ConfigError);
  EXPECT_THROW(parse("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse("nucleus = a 1 2\n"), ConfigError);
  EXPECT_THROW(parse("noise_kind = pink\n"), ConfigError);
  EXPECT_THROW(generate_sequence(parse("frames = 2\nnucleus = a 1 1 1 1 1 1 1\napoptosis = 5 a\n")),
               ConfigError);
  EXPECT_THROW(generate_sequence(parse("frames = 2\nnucleus = a 1 1 1 1 1 1 1\ndivision = 1 zz p q 1 0 0\n")),
               ConfigError);
  // Entirely outside the volume.
  EXPECT_THROW(generate_sequence(parse("dims = 8 8 4\nnucleus = a 100 1 1 0.5 0.5 0.5 1\n")),
               ConfigError);
}

TEST(Synth, DeterministicAndNoiseClamped) {
  SynthScript sc = fixture::crowded_script(5);
  sc.noise = 0.3;
  for (NoiseKind kind : {NoiseKind::Gaussian, NoiseKind::Uniform}) {
    sc.noise_kind = kind;
    const SynthSequence a = generate_sequence(sc);
    const SynthSequence b = generate_sequence(sc);
    EXPECT_EQ(a.intensity, b.intensity);
    for (float v : a.intensity[0].data()) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
  }
  SynthScript other = sc;
  other.seed += 1;
  EXPECT_NE(generate_sequence(other).intensity, generate_sequence(sc).intensity);
}

TEST(Synth, WritesCtcLayout) {
  fixture::TempDir dir;
  const SynthSequence s = generate_sequence(fixture::tracking_script(4));
  write_sequence(s, dir.path());
  const auto tra = SequenceLayout::truth_tracking(dir.path() / "01_GT");
  EXPECT_EQ(read_lineage(tra.lineage_path()), s.lineage);
  EXPECT_EQ(read_label_sequence(tra), s.truth);
  EXPECT_EQ(read_label_sequence(SequenceLayout::truth_segmentation(dir.path() / "01_GT")),
            s.truth);
  const auto raw = read_volume_sequence(SequenceLayout::raw_images(dir.path() / "01"));
  ASSERT_EQ(raw.size(), s.intensity.size());
  EXPECT_EQ(raw[0].spacing(), s.intensity[0].spacing());
}

TEST(Synth, ScriptTextRoundTrips) {
  SynthScript s = fixture::tracking_script(4);
  s.noise = 0.125;
  s.noise_kind = NoiseKind::Uniform;
  s.seed = 123456789012345ULL;
  const std::string text = to_text(s);
  std::istringstream in(text);
  const SynthScript back = parse_script(KeyValueFile::parse(in));
  EXPECT_EQ(to_text(back), text);
  EXPECT_EQ(generate_sequence(back).truth, generate_sequence(s).truth);
  EXPECT_EQ(generate_sequence(back).intensity, generate_sequence(s).intensity);
}
