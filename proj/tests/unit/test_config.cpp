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

#include "svtrack/config.hpp"
#include "svtrack/error.hpp"

using namespace svtrack;

namespace {

PipelineConfig from(const std::string& text) {
  std::istringstream in(text);
  return config_from(KeyValueFile::parse(in, "cfg"));
}

}  // namespace

TEST(KeyValue, SectionsCommentsAndRepeats) {
  std::istringstream in("a = 1 # note\n\n[s]\nb = x y\nb = z\n");
  const KeyValueFile kv = KeyValueFile::parse(in);
  EXPECT_EQ(kv.get("a"), "1");
  EXPECT_EQ(kv.get("s.b"), "z");
  EXPECT_EQ(kv.get_all("s.b"), (std::vector<std::string>{"x y", "z"}));
  EXPECT_EQ(kv.get("b"), std::nullopt);
}

TEST(KeyValue, MalformedLines) {
  std::istringstream a("novalue\n"), b("[open\n"), c(" = 3\n");
  EXPECT_THROW(KeyValueFile::parse(a), ConfigError);
  EXPECT_THROW(KeyValueFile::parse(b), ConfigError);
  EXPECT_THROW(KeyValueFile::parse(c), ConfigError);
}

TEST(Config, Defaults) {
  const PipelineConfig c = from("");
  EXPECT_EQ(c.conn, Connectivity::Face6);
  EXPECT_EQ(c.tracker.threshold, 1.0);
  EXPECT_EQ(c.tracker.max_radius, 10);
  EXPECT_EQ(c.aogm.ea, 1.5);
  EXPECT_TRUE(c.correction_enabled);
}

TEST(Config, FlatAndSectionedKeysAgree) {
  const PipelineConfig a = from("slic.k = 500\ntracker.threshold = 0.5\nconnectivity = 26\n");
  const PipelineConfig b = from("connectivity = 26\n[slic]\nk = 500\n[tracker]\nthreshold = 0.5\n");
  EXPECT_EQ(a.slic.k, 500);
  EXPECT_EQ(b.slic.k, 500);
  EXPECT_EQ(a.tracker.threshold, b.tracker.threshold);
  EXPECT_EQ(a.watershed.conn, Connectivity::Full26);
  EXPECT_EQ(a.tracker.conn, Connectivity::Full26);
}

TEST(Config, Errors) {
  EXPECT_THROW(from("nope = 1\n"), ConfigError);
  EXPECT_THROW(from("slic.k = many\n"), ConfigError);
  EXPECT_THROW(from("slic.k = 0\n"), ConfigError);
  EXPECT_THROW(from("connectivity = 8\n"), ConfigError);
  EXPECT_THROW(from("spacing = 1 2\n"), ConfigError);
  EXPECT_THROW(from("aogm.fn = -1\n"), ConfigError);
  EXPECT_THROW(from("correction.enabled = maybe\n"), ConfigError);
  EXPECT_THROW(from("tracker.threshold = 0\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent.conf"), ConfigError);
}

TEST(Config, ResolvedTextRoundTrips) {
  const PipelineConfig c = from(
      "spacing = 0.1 0.2 1.5\nconnectivity = 18\n[detection]\nradii = 1 2 3\n"
      "[slic]\nk = 77\ncompactness = 0.125\n[aogm]\nea = 2\n[correction]\nenabled = false\n");
  const std::string text = to_text(c);
  const PipelineConfig back = from(text);
  EXPECT_EQ(to_text(back), text);
  EXPECT_EQ(back.spacing, c.spacing);
  EXPECT_EQ(back.blob_radii, c.blob_radii);
  EXPECT_EQ(back.slic.compactness, 0.125);
  EXPECT_FALSE(back.correction_enabled);
  EXPECT_NE(text.find("connectivity = 18"), std::string::npos);
}
