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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "svtrack/config.hpp"
#include "svtrack/error.hpp"
#include "svtrack/metrics.hpp"
#include "svtrack/pipeline.hpp"

namespace {

enum ExitCode : int { kOk = 0, kOther = 1, kConfig = 2, kIo = 3, kAlgorithm = 4 };

struct Common {
  std::string config;
  std::string input;
  std::string output;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  bool keep_intermediates = false;
  std::string log_level = "info";
};

svtrack::PipelineConfig resolve(const Common& c) {
  svtrack::PipelineConfig cfg;
  if (!c.config.empty()) cfg = svtrack::load_config(c.config);
  if (c.threads > 0) cfg.threads = c.threads;
  if (c.seed) cfg.seed = *c.seed;
  if (c.keep_intermediates) cfg.keep_intermediates = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svtrack: 3D nucleus segmentation and tracking"};
  app.require_subcommand(1);
  Common c;
  std::string truth;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    sub->add_option("--config", c.config, "key = value configuration file")->check(CLI::ExistingFile);
    auto* in = sub->add_option("--input", c.input, "input directory or file");
    if (needs_input) in->required();
    sub->add_option("--output", c.output, "output directory")->required();
    sub->add_option("--threads", c.threads, "worker threads (overrides config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "random seed (overrides config / script)");
    sub->add_flag("--keep-intermediates", c.keep_intermediates,
                  "also write probability, watershed and supervoxel volumes");
    sub->add_option("--log-level", c.log_level, "trace, debug, info, warn, error or off");
  };

  auto* seg = app.add_subcommand("segment", "segment raw frames t%03d.tif into mask%03d.tif");
  add_common(seg, true);
  auto* trk = app.add_subcommand("track", "link masks and write res_track.txt");
  add_common(trk, true);
  auto* evl = app.add_subcommand("evaluate", "score a result directory against ground truth");
  add_common(evl, true);
  evl->add_option("--truth", truth, "ground-truth directory holding TRA/ and SEG/")->required();
  evl->get_option("--output")->required(false);
  auto* syn = app.add_subcommand("synth", "render a synthetic sequence from a script");
  add_common(syn, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  spdlog::set_level(spdlog::level::from_str(c.log_level));
  try {
    if (seg->parsed()) {
      svtrack::run_segment(resolve(c), c.input, c.output);
    } else if (trk->parsed()) {
      svtrack::run_track(resolve(c), c.input, c.output);
    } else if (evl->parsed()) {
      const auto e = svtrack::run_evaluate(resolve(c), c.input, truth, c.output);
      std::cout << svtrack::format_report(e);
    } else if (syn->parsed()) {
      svtrack::run_synth(c.input, c.output, c.seed);
    }
  } catch (const svtrack::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfig;
  } catch (const svtrack::IoError& e) {
    spdlog::error("I/O error: {}", e.what());
    return kIo;
  } catch (const svtrack::AlgorithmError& e) {
    spdlog::error("{}", e.what());
    return kAlgorithm;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kAlgorithm;
  } catch (const std::out_of_range& e) {
    spdlog::error("{}", e.what());
    return kAlgorithm;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kOther;
  }
  return kOk;
}
