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

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "svtrack/ctc_io.hpp"
#include "svtrack/error.hpp"

using namespace svtrack;

TEST(LabelTiff, RoundTrip) {
  fixture::TempDir dir;
  std::mt19937_64 rng(1);
  LabelVolume v = fixture::random_labels(Dims{9, 7, 5}, 65535, rng);
  v.set_spacing({0.09, 0.09, 1.0});
  write_label_tiff(dir.path() / "m.tif", v);
  EXPECT_EQ(read_label_tiff(dir.path() / "m.tif"), v);
}

TEST(LabelTiff, RejectsLabelsAbove16Bits) {
  fixture::TempDir dir;
  LabelVolume v(Dims{2, 2, 2});
  v[0] = 70000;
  EXPECT_THROW(write_label_tiff(dir.path() / "m.tif", v), IoError);
}

TEST(LabelTiff, FallbackSpacingWithoutMetadata) {
  fixture::TempDir dir;
  const LabelVolume v(Dims{3, 3, 2}, Spacing{0.5, 0.5, 2.0});
  write_label_tiff(dir.path() / "m.tif", v);
  EXPECT_EQ(read_label_tiff(dir.path() / "m.tif", {9, 9, 9}).spacing(), v.spacing());
}

TEST(VolumeTiff, LargeStackShape) {
  fixture::TempDir dir;
  const Volume v(Dims{512, 708, 35}, Spacing{0.09, 0.09, 1.0}, 0.25f);
  write_volume_tiff_u16(dir.path() / "t000.tif", v);
  const Volume back = read_volume_tiff(dir.path() / "t000.tif");
  EXPECT_EQ(back.dims(), (Dims{512, 708, 35}));
  EXPECT_EQ(back.spacing(), v.spacing());
}

TEST(VolumeTiff, FloatRoundTripExact) {
  fixture::TempDir dir;
  Volume v(Dims{4, 3, 2});
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(i) * 0.37f - 2.0f;
  write_volume_tiff_f32(dir.path() / "f.tif", v);
  EXPECT_EQ(read_volume_tiff(dir.path() / "f.tif"), v);
}

TEST(Sequence, RoundTripAndMissingFrame) {
  fixture::TempDir dir;
  std::mt19937_64 rng(2);
  std::vector<LabelVolume> frames;
  for (int t = 0; t < 3; ++t) frames.push_back(fixture::random_labels(Dims{5, 4, 3}, 9, rng));
  const SequenceLayout layout = SequenceLayout::result(dir.path());
  write_label_sequence(layout, frames);
  EXPECT_EQ(layout.count_frames(), 3);
  EXPECT_EQ(read_label_sequence(layout), frames);

  std::filesystem::remove(layout.frame_path(1));
  try {
    (void)read_label_sequence(layout);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("mask001.tif"), std::string::npos) << e.what();
  }
}

TEST(Sequence, DimsMismatchRejected) {
  fixture::TempDir dir;
  const SequenceLayout layout = SequenceLayout::result(dir.path());
  write_label_tiff(layout.frame_path(0), LabelVolume(Dims{4, 4, 2}));
  write_label_tiff(layout.frame_path(1), LabelVolume(Dims{4, 5, 2}));
  EXPECT_THROW(read_label_sequence(layout), IoError);
}

TEST(Sequence, LayoutNames) {
  EXPECT_EQ(SequenceLayout::raw_images("r").frame_path(7), std::filesystem::path("r/t007.tif"));
  EXPECT_EQ(SequenceLayout::result("r").frame_path(12), std::filesystem::path("r/mask012.tif"));
  EXPECT_EQ(SequenceLayout::result("r").lineage_path(), std::filesystem::path("r/res_track.txt"));
  const auto tra = SequenceLayout::truth_tracking("gt");
  EXPECT_EQ(tra.frame_path(0), std::filesystem::path("gt/TRA/man_track000.tif"));
  EXPECT_EQ(tra.lineage_path(), std::filesystem::path("gt/TRA/man_track.txt"));
  EXPECT_EQ(SequenceLayout::truth_segmentation("gt").frame_path(3),
            std::filesystem::path("gt/SEG/man_seg003.tif"));
}

TEST(Lineage, SingleTrackLine) {
  fixture::TempDir dir;
  write_lineage({{{1, 0, 4, 0}}}, dir.path() / "res_track.txt");
  std::ifstream in(dir.path() / "res_track.txt");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "1 0 4 0\n");
}

TEST(Lineage, DivisionLinesSortedById) {
  fixture::TempDir dir;
  const LineageTable t{{{4, 3, 5, 2}, {1, 0, 5, 0}, {3, 3, 5, 2}, {2, 0, 2, 0}}};
  write_lineage(t, dir.path() / "res_track.txt");
  std::ifstream in(dir.path() / "res_track.txt");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "1 0 5 0\n2 0 2 0\n3 3 5 2\n4 3 5 2\n");
  LineageTable sorted = t;
  sorted.sort_by_id();
  EXPECT_EQ(read_lineage(dir.path() / "res_track.txt"), sorted);
}

TEST(Lineage, MalformedFileRejected) {
  fixture::TempDir dir;
  std::ofstream(dir.path() / "bad.txt") << "1 0 x 0\n";
  EXPECT_THROW(read_lineage(dir.path() / "bad.txt"), IoError);
  EXPECT_THROW(read_lineage(dir.path() / "missing.txt"), IoError);
}
