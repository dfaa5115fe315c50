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

#include "svtrack/ctc_io.hpp"

#include <tiffio.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <regex>
#include <sstream>

#include "svtrack/error.hpp"

namespace svtrack {
namespace fs = std::filesystem;
namespace {

struct TiffCloser {
  void operator()(TIFF* t) const {
    if (t != nullptr) TIFFClose(t);
  }
};
using TiffHandle = std::unique_ptr<TIFF, TiffCloser>;

TiffHandle open_tiff(const fs::path& path, const char* mode) {
  TIFFSetWarningHandler(nullptr);
  TIFFSetErrorHandler(nullptr);
  TiffHandle h(TIFFOpen(path.c_str(), mode));
  if (!h) {
    throw IoError(std::string("cannot open TIFF '") + path.string() + "' (" +
                  mode + ")");
  }
  return h;
}

constexpr const char* kSpacingTag = "svtrack spacing=";

std::optional<Spacing> parse_spacing(const char* desc) {
  if (desc == nullptr) return std::nullopt;
  const char* p = std::strstr(desc, kSpacingTag);
  if (p == nullptr) return std::nullopt;
  Spacing s;
  if (std::sscanf(p + std::strlen(kSpacingTag), "%lf,%lf,%lf", &s.sx, &s.sy,
                  &s.sz) != 3) {
    return std::nullopt;
  }
  if (!(s.sx > 0 && s.sy > 0 && s.sz > 0)) return std::nullopt;
  return s;
}

std::string spacing_description(const Spacing& s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s%.17g,%.17g,%.17g", kSpacingTag, s.sx, s.sy,
                s.sz);
  return buf;
}

double read_sample(const unsigned char* row, int x, int bits, SampleKind kind) {
  if (kind == SampleKind::Float) {
    if (bits == 32) {
      float v;
      std::memcpy(&v, row + 4 * x, 4);
      return v;
    }
    double v;
    std::memcpy(&v, row + 8 * x, 8);
    return v;
  }
  switch (bits) {
    case 8:
      return row[x];
    case 16: {
      std::uint16_t v;
      std::memcpy(&v, row + 2 * x, 2);
      return v;
    }
    default: {
      std::uint32_t v;
      std::memcpy(&v, row + 4 * x, 4);
      return v;
    }
  }
}

template <typename Sample>
void write_stack(const fs::path& path, const Dims& dims, const Spacing& spacing,
                 std::uint16_t sample_format,
                 const std::function<Sample(std::size_t)>& sample_at) {
  fs::path parent = path.parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  auto tif = open_tiff(path, dims.voxels() * sizeof(Sample) > (3ull << 30) ? "w8" : "w");
  const std::string desc = spacing_description(spacing);
  std::vector<Sample> row(static_cast<std::size_t>(dims.nx));
  std::size_t i = 0;
  for (int z = 0; z < dims.nz; ++z) {
    TIFF* t = tif.get();
    TIFFSetField(t, TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(dims.nx));
    TIFFSetField(t, TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(dims.ny));
    TIFFSetField(t, TIFFTAG_BITSPERSAMPLE, static_cast<std::uint16_t>(8 * sizeof(Sample)));
    TIFFSetField(t, TIFFTAG_SAMPLESPERPIXEL, static_cast<std::uint16_t>(1));
    TIFFSetField(t, TIFFTAG_SAMPLEFORMAT, sample_format);
    TIFFSetField(t, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(t, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(t, TIFFTAG_COMPRESSION, COMPRESSION_NONE);
    TIFFSetField(t, TIFFTAG_ROWSPERSTRIP, static_cast<std::uint32_t>(dims.ny));
    TIFFSetField(t, TIFFTAG_SUBFILETYPE, FILETYPE_PAGE);
    TIFFSetField(t, TIFFTAG_PAGENUMBER, static_cast<std::uint16_t>(z),
                 static_cast<std::uint16_t>(dims.nz));
    if (z == 0) TIFFSetField(t, TIFFTAG_IMAGEDESCRIPTION, desc.c_str());
    for (int y = 0; y < dims.ny; ++y) {
      for (int x = 0; x < dims.nx; ++x, ++i) row[static_cast<std::size_t>(x)] = sample_at(i);
      if (TIFFWriteScanline(t, row.data(), static_cast<std::uint32_t>(y), 0) < 0) {
        throw IoError("failed writing TIFF '" + path.string() + "'");
      }
    }
    if (!TIFFWriteDirectory(t)) {
      throw IoError("failed writing TIFF directory in '" + path.string() + "'");
    }
  }
}

}  // namespace

TiffStack read_tiff_stack(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("missing TIFF file '" + path.string() + "'");
  auto tif = open_tiff(path, "r");
  TIFF* t = tif.get();
  TiffStack out;
  int pages = 0;
  std::vector<unsigned char> row;
  do {
    std::uint32_t w = 0, h = 0;
    std::uint16_t bits = 0, spp = 1, fmt = SAMPLEFORMAT_UINT, planar = PLANARCONFIG_CONTIG;
    TIFFGetField(t, TIFFTAG_IMAGEWIDTH, &w);
    TIFFGetField(t, TIFFTAG_IMAGELENGTH, &h);
    TIFFGetFieldDefaulted(t, TIFFTAG_BITSPERSAMPLE, &bits);
    TIFFGetFieldDefaulted(t, TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(t, TIFFTAG_SAMPLEFORMAT, &fmt);
    TIFFGetFieldDefaulted(t, TIFFTAG_PLANARCONFIG, &planar);
    if (spp != 1) throw IoError("'" + path.string() + "' is not single-channel grayscale");
    if (TIFFIsTiled(t)) throw IoError("tiled TIFF not supported: '" + path.string() + "'");
    SampleKind kind;
    if (fmt == SAMPLEFORMAT_IEEEFP && (bits == 32 || bits == 64)) {
      kind = SampleKind::Float;
    } else if ((fmt == SAMPLEFORMAT_UINT || fmt == SAMPLEFORMAT_VOID) &&
               (bits == 8 || bits == 16 || bits == 32)) {
      kind = SampleKind::Unsigned;
    } else {
      throw IoError("unsupported bit depth " + std::to_string(bits) + " in '" +
                    path.string() + "'");
    }
    if (pages == 0) {
      out.dims = {static_cast<int>(w), static_cast<int>(h), 0};
      out.bits_per_sample = bits;
      out.kind = kind;
      char* desc = nullptr;
      if (TIFFGetField(t, TIFFTAG_IMAGEDESCRIPTION, &desc)) out.spacing = parse_spacing(desc);
    } else if (static_cast<int>(w) != out.dims.nx || static_cast<int>(h) != out.dims.ny ||
               bits != out.bits_per_sample || kind != out.kind) {
      throw IoError("inconsistent page " + std::to_string(pages) + " in '" +
                    path.string() + "'");
    }
    row.resize(static_cast<std::size_t>(TIFFScanlineSize(t)));
    for (std::uint32_t y = 0; y < h; ++y) {
      if (TIFFReadScanline(t, row.data(), y, 0) < 0) {
        throw IoError("failed reading '" + path.string() + "'");
      }
      for (std::uint32_t x = 0; x < w; ++x) {
        out.values.push_back(read_sample(row.data(), static_cast<int>(x), bits, kind));
      }
    }
    ++pages;
  } while (TIFFReadDirectory(t));
  out.dims.nz = pages;
  if (out.dims.voxels() == 0) throw IoError("empty TIFF stack '" + path.string() + "'");
  return out;
}

Volume read_volume_tiff(const fs::path& path, const Spacing& fallback_spacing) {
  TiffStack s = read_tiff_stack(path);
  std::vector<float> data(s.values.begin(), s.values.end());
  return Volume(s.dims, s.spacing.value_or(fallback_spacing), std::move(data));
}

LabelVolume read_label_tiff(const fs::path& path, const Spacing& fallback_spacing) {
  TiffStack s = read_tiff_stack(path);
  if (s.kind != SampleKind::Unsigned) {
    throw IoError("label TIFF must hold unsigned integers: '" + path.string() + "'");
  }
  std::vector<Label> data(s.values.size());
  std::transform(s.values.begin(), s.values.end(), data.begin(),
                 [](double v) { return static_cast<Label>(v); });
  return LabelVolume(s.dims, s.spacing.value_or(fallback_spacing), std::move(data));
}

void write_label_tiff(const fs::path& path, const LabelVolume& labels) {
  for (Label l : labels.data()) {
    if (l > 65535) {
      throw IoError("label " + std::to_string(l) +
                    " exceeds the 16-bit label range for '" + path.string() + "'");
    }
  }
  write_stack<std::uint16_t>(path, labels.dims(), labels.spacing(), SAMPLEFORMAT_UINT,
                             [&](std::size_t i) { return static_cast<std::uint16_t>(labels[i]); });
}

void write_volume_tiff_u16(const fs::path& path, const Volume& v) {
  write_stack<std::uint16_t>(path, v.dims(), v.spacing(), SAMPLEFORMAT_UINT, [&](std::size_t i) {
    const double c = std::clamp(static_cast<double>(v[i]), 0.0, 1.0);
    return static_cast<std::uint16_t>(std::lround(c * 65535.0));
  });
}

void write_volume_tiff_f32(const fs::path& path, const Volume& v) {
  write_stack<float>(path, v.dims(), v.spacing(), SAMPLEFORMAT_IEEEFP,
                     [&](std::size_t i) { return v[i]; });
}

SequenceLayout SequenceLayout::raw_images(const fs::path& root) {
  return {root, "t%03d.tif", ""};
}

SequenceLayout SequenceLayout::result(const fs::path& root) {
  return {root, "mask%03d.tif", "res_track.txt"};
}

SequenceLayout SequenceLayout::truth_tracking(const fs::path& gt_root) {
  return {gt_root / "TRA", "man_track%03d.tif", "man_track.txt"};
}

SequenceLayout SequenceLayout::truth_segmentation(const fs::path& gt_root) {
  return {gt_root / "SEG", "man_seg%03d.tif", ""};
}

fs::path SequenceLayout::frame_path(int t) const {
  char buf[256];
  std::snprintf(buf, sizeof buf, frame_pattern.c_str(), t);
  return root / buf;
}

fs::path SequenceLayout::lineage_path() const { return root / lineage_file; }

int SequenceLayout::count_frames() const {
  if (!fs::is_directory(root)) {
    throw IoError("sequence directory '" + root.string() + "' does not exist");
  }
  // "%03d" -> "(\d+)"; the rest of the pattern is matched literally.
  const std::regex field(R"(%0?\d*d)");
  std::smatch m;
  if (!std::regex_search(frame_pattern, m, field)) {
    throw ConfigError("frame pattern needs an integer field: " + frame_pattern);
  }
  auto quote = [](const std::string& s) {
    return std::regex_replace(s, std::regex(R"([.^$|()\[\]{}*+?\\])"), R"(\$&)");
  };
  const std::regex file_re(quote(m.prefix().str()) + R"((\d+))" + quote(m.suffix().str()));
  std::vector<int> indices;
  for (const auto& entry : fs::directory_iterator(root)) {
    const std::string name = entry.path().filename().string();
    std::smatch fm;
    if (std::regex_match(name, fm, file_re)) indices.push_back(std::stoi(fm[1].str()));
  }
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] != static_cast<int>(i)) {
      throw IoError("missing frame " + std::to_string(i) + " (" +
                    frame_path(static_cast<int>(i)).filename().string() + ") in '" +
                    root.string() + "'; found frames up to " +
                    std::to_string(indices.back()));
    }
  }
  return static_cast<int>(indices.size());
}

std::vector<Volume> read_volume_sequence(const SequenceLayout& layout,
                                         const Spacing& fallback_spacing) {
  const int n = layout.count_frames();
  std::vector<Volume> frames;
  frames.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    frames.push_back(read_volume_tiff(layout.frame_path(t), fallback_spacing));
    if (frames.back().dims() != frames.front().dims()) {
      throw IoError("frame " + std::to_string(t) + " dims " +
                    to_string(frames.back().dims()) + " differ from frame 0 " +
                    to_string(frames.front().dims()));
    }
  }
  return frames;
}

std::vector<LabelVolume> read_label_sequence(const SequenceLayout& layout,
                                             const Spacing& fallback_spacing) {
  const int n = layout.count_frames();
  std::vector<LabelVolume> frames;
  frames.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    frames.push_back(read_label_tiff(layout.frame_path(t), fallback_spacing));
    if (frames.back().dims() != frames.front().dims()) {
      throw IoError("frame " + std::to_string(t) + " dims " +
                    to_string(frames.back().dims()) + " differ from frame 0 " +
                    to_string(frames.front().dims()));
    }
  }
  return frames;
}

void write_label_sequence(const SequenceLayout& layout,
                          const std::vector<LabelVolume>& frames) {
  for (std::size_t t = 0; t < frames.size(); ++t) {
    write_label_tiff(layout.frame_path(static_cast<int>(t)), frames[t]);
  }
}

void write_lineage(const LineageTable& table, const fs::path& path) {
  LineageTable sorted = table;
  sorted.sort_by_id();
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write lineage file '" + path.string() + "'");
  for (const Track& t : sorted.tracks) {
    out << t.id << ' ' << t.begin << ' ' << t.end << ' ' << t.parent << '\n';
  }
  if (!out) throw IoError("failed writing lineage file '" + path.string() + "'");
}

LineageTable read_lineage(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read lineage file '" + path.string() + "'");
  LineageTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long id, begin, end, parent;
    if (!(ls >> id >> begin >> end >> parent) || id <= 0 || parent < 0) {
      throw IoError("malformed lineage line " + std::to_string(lineno) + " in '" +
                    path.string() + "'");
    }
    table.tracks.push_back({static_cast<Label>(id), static_cast<int>(begin),
                            static_cast<int>(end), static_cast<Label>(parent)});
  }
  table.sort_by_id();
  return table;
}

}  // namespace svtrack
