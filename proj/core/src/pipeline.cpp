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

#include "svtrack/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "svtrack/ctc_io.hpp"
#include "svtrack/error.hpp"
#include "svtrack/morphology.hpp"
#include "svtrack/slic.hpp"
#include "svtrack/synth.hpp"
#include "svtrack/tracker.hpp"
#include "svtrack/watershed.hpp"

namespace svtrack {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string frame_name(const char* pattern, int t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, t);
  return buf;
}

// Re-raise the active exception with the frame index in front, keeping the
// error category.
[[noreturn]] void rethrow_with_frame(int t) {
  const std::string where = "frame " + std::to_string(t) + ": ";
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(where + e.what());
  } catch (const IoError& e) {
    throw IoError(where + e.what());
  } catch (const std::exception& e) {
    throw AlgorithmError(where + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_correlation(const std::filesystem::path& path, const CorrelationTable& table) {
  std::string text = "supervoxel region count\n";
  for (const auto& [sv, row] : table.rows()) {
    for (const auto& [ws, n] : row) {
      text += std::to_string(sv) + ' ' + std::to_string(ws) + ' ' + std::to_string(n) + '\n';
    }
  }
  write_text(path, text);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

Label max_label(const LabelVolume& v) {
  Label m = 0;
  for (Label l : v.data()) m = std::max(m, l);
  return m;
}

}  // namespace

FrameSegmentation segment_frame(const Volume& intensity, const PipelineConfig& cfg,
                                const std::optional<Volume>& probability) {
  FrameSegmentation out;
  auto start = Clock::now();
  const Volume norm = normalize_min_max(intensity);
  if (probability) {
    if (probability->dims() != intensity.dims()) {
      throw std::invalid_argument("probability map dims " + to_string(probability->dims()) +
                                  " differ from image dims " + to_string(intensity.dims()));
    }
    check_probability_range(*probability);
    out.probability = *probability;
    out.probability.set_spacing(intensity.spacing());
  } else {
    out.probability = blob_probability_map(norm, cfg.blob_radii);
  }
  out.seeds = extract_seeds(out.probability, cfg.seed_min_score, cfg.seed_min_separation);
  out.timings.detection_ms = ms_since(start);

  start = Clock::now();
  out.watershed = watershed(out.probability, out.seeds, cfg.watershed);
  out.timings.watershed_ms = ms_since(start);

  if (!cfg.correction_enabled) {
    out.labels = out.watershed;
    return out;
  }

  start = Clock::now();
  const std::size_t regions = region_sizes(out.watershed).size();
  SlicConfig sc = cfg.slic;
  SlicResult sr = slic_detailed(norm, sc);
  for (int retry = 0; retry < 4 && sr.centers.size() <= regions; ++retry) {
    sc.k *= 2;
    spdlog::debug("slic produced {} supervoxels for {} regions, retrying with k={}",
                  sr.centers.size(), regions, sc.k);
    sr = slic_detailed(norm, sc);
  }
  out.supervoxels = std::move(sr.labels);
  out.timings.slic_ms = ms_since(start);

  start = Clock::now();
  out.correlation = cluster_correlation(out.supervoxels, out.watershed);
  out.labels = correct_boundaries(out.supervoxels, out.watershed, out.correlation);
  for (Label l : dropped_regions(out.watershed, out.labels)) {
    spdlog::info("watershed region {} won no supervoxel and was dropped", l);
  }
  out.timings.correction_ms = ms_since(start);
  return out;
}

void run_segment(const PipelineConfig& cfg, const std::filesystem::path& input_dir,
                 const std::filesystem::path& output_dir) {
  const SequenceLayout raw = SequenceLayout::raw_images(input_dir);
  const int frames = raw.count_frames();
  std::optional<SequenceLayout> prob_layout;
  if (!cfg.probability_dir.empty()) {
    prob_layout = SequenceLayout::raw_images(cfg.probability_dir);
    if (prob_layout->count_frames() != frames) {
      throw IoError("probability_dir has " + std::to_string(prob_layout->count_frames()) +
                    " frames, input has " + std::to_string(frames));
    }
  }
  ensure_dir(output_dir);
  const SequenceLayout result = SequenceLayout::result(output_dir);
  const std::filesystem::path inter = output_dir / "intermediates";
  if (cfg.keep_intermediates) ensure_dir(inter);
  write_text(output_dir / "config.resolved.txt", to_text(cfg));
  spdlog::info("segmenting {} frames from {} with {} thread(s)", frames, input_dir.string(),
               cfg.threads);

  auto process = [&](int t) {
    try {
      const Volume img = read_volume_tiff(raw.frame_path(t), cfg.spacing);
      std::optional<Volume> prob;
      if (prob_layout) prob = load_probability_map(prob_layout->frame_path(t), img.spacing());
      const FrameSegmentation seg = segment_frame(img, cfg, prob);
      write_label_tiff(result.frame_path(t), seg.labels);
      if (cfg.keep_intermediates) {
        write_volume_tiff_f32(inter / frame_name("prob%03d.tif", t), seg.probability);
        write_label_tiff(inter / frame_name("ws%03d.tif", t), seg.watershed);
        if (!seg.supervoxels.empty()) {
          if (max_label(seg.supervoxels) <= 65535) {
            write_label_tiff(inter / frame_name("sv%03d.tif", t), seg.supervoxels);
          } else {
            spdlog::warn("frame {}: supervoxel labels exceed 16 bits, sv{:03d}.tif skipped", t, t);
          }
          write_correlation(inter / frame_name("corr%03d.txt", t), seg.correlation);
        }
      }
      spdlog::info(
          "frame {}: seeds={} watershed={} nuclei={} detection={:.1f}ms watershed={:.1f}ms "
          "slic={:.1f}ms correction={:.1f}ms",
          t, seg.seeds.size(), region_sizes(seg.watershed).size(), region_sizes(seg.labels).size(),
          seg.timings.detection_ms, seg.timings.watershed_ms, seg.timings.slic_ms,
          seg.timings.correction_ms);
    } catch (...) {
      rethrow_with_frame(t);
    }
  };

  const int workers = std::max(1, std::min(cfg.threads, frames));
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  int first_error_frame = frames;
  auto worker = [&] {
    for (int t = next++; t < frames; t = next++) {
      try {
        process(t);
      } catch (...) {
        std::lock_guard lock(err_mu);
        // Report the earliest failing frame regardless of scheduling.
        if (t < first_error_frame) {
          first_error_frame = t;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

void run_track(const PipelineConfig& cfg, const std::filesystem::path& input_dir,
               const std::filesystem::path& output_dir) {
  const SequenceLayout in = SequenceLayout::result(input_dir);
  const std::vector<LabelVolume> masks = read_label_sequence(in, cfg.spacing);
  spdlog::info("tracking {} frames from {}", masks.size(), input_dir.string());
  const auto start = Clock::now();
  const TrackingResult tr = track_sequence(masks, cfg.tracker);
  spdlog::info("tracking produced {} tracks in {:.1f}ms", tr.lineage.tracks.size(),
               ms_since(start));
  ensure_dir(output_dir);
  const SequenceLayout out = SequenceLayout::result(output_dir);
  write_label_sequence(out, tr.tracked);
  write_lineage(tr.lineage, out.lineage_path());
  write_text(output_dir / "config.resolved.txt", to_text(cfg));
}

Evaluation run_evaluate(const PipelineConfig& cfg, const std::filesystem::path& result_dir,
                        const std::filesystem::path& truth_dir,
                        const std::filesystem::path& output_dir) {
  const SequenceLayout res = SequenceLayout::result(result_dir);
  const SequenceLayout tra = SequenceLayout::truth_tracking(truth_dir);
  const SequenceLayout seg = SequenceLayout::truth_segmentation(truth_dir);

  const auto res_masks = read_label_sequence(res, cfg.spacing);
  const auto tra_masks = read_label_sequence(tra, cfg.spacing);
  if (res_masks.size() != tra_masks.size()) {
    throw IoError("layout mismatch: result has " + std::to_string(res_masks.size()) +
                  " frames, truth has " + std::to_string(tra_masks.size()));
  }
  const LineageTable res_lineage = read_lineage(res.lineage_path());
  const LineageTable tra_lineage = read_lineage(tra.lineage_path());
  std::vector<LabelVolume> seg_masks;
  if (std::filesystem::is_directory(seg.root)) {
    seg_masks = read_label_sequence(seg, cfg.spacing);
    if (seg_masks.size() != res_masks.size()) {
      throw IoError("layout mismatch: result has " + std::to_string(res_masks.size()) +
                    " frames, SEG truth has " + std::to_string(seg_masks.size()));
    }
  } else {
    seg_masks = tra_masks;
  }

  Evaluation e;
  e.costs = cfg.aogm;
  e.detection = detection_aogm(res_masks, tra_masks, cfg.aogm);
  e.det = det_score(res_masks, tra_masks, cfg.aogm);
  e.seg = seg_score(res_masks, seg_masks);
  e.tracking = tracking_aogm(res_lineage, res_masks, tra_lineage, tra_masks, cfg.aogm);
  e.tra = tra_score(res_lineage, res_masks, tra_lineage, tra_masks, cfg.aogm);
  e.op = op_scores(e.det, e.seg, e.tra);

  if (!output_dir.empty()) {
    ensure_dir(output_dir);
    write_text(output_dir / "scores.txt", format_report(e));
    write_text(output_dir / "scores.json", format_report_json(e));
    write_text(output_dir / "config.resolved.txt", to_text(cfg));
  }
  return e;
}

void run_synth(const std::filesystem::path& script_path, const std::filesystem::path& output_dir,
               std::optional<std::uint64_t> seed_override) {
  SynthScript script = load_script(script_path);
  if (seed_override) script.seed = *seed_override;
  const SynthSequence seq = generate_sequence(script);
  write_sequence(seq, output_dir);
  // The resolved script, seed included, makes the run reproducible.
  write_text(output_dir / "synth.resolved.txt", to_text(script));
  spdlog::info("wrote {} frames with {} tracks to {}", seq.intensity.size(),
               seq.lineage.tracks.size(), output_dir.string());
}

}  // namespace svtrack
