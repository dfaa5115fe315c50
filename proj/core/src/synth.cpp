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

#include "svtrack/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "svtrack/ctc_io.hpp"
#include "svtrack/error.hpp"

namespace svtrack {
namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

std::array<double, 3> triple(const std::vector<std::string>& tok, std::size_t at,
                             const std::string& what) {
  return {parse_number(tok[at], what), parse_number(tok[at + 1], what),
          parse_number(tok[at + 2], what)};
}

struct Instance {
  std::string name;
  std::array<double, 3> center{};
  std::array<double, 3> radii{};
  double peak = 0;
  std::array<double, 3> drift{};
  int begin = 0;
  int end = 0;
  std::string parent;
  std::size_t order = 0;

  [[nodiscard]] std::array<double, 3> center_at(int t) const {
    const double dt = t - begin;
    return {center[0] + drift[0] * dt, center[1] + drift[1] * dt, center[2] + drift[2] * dt};
  }
};

}  // namespace

SynthScript parse_script(const KeyValueFile& kv) {
  SynthScript s;
  for (const auto& [key, value] : kv.entries()) {
    const std::string what = kv.source() + ": " + key;
    const auto tok = tokens(value);
    if (key == "dims") {
      const auto n = parse_numbers(value, what);
      if (n.size() != 3) throw ConfigError(what + ": expected nx ny nz");
      s.dims = {static_cast<int>(n[0]), static_cast<int>(n[1]), static_cast<int>(n[2])};
    } else if (key == "spacing") {
      const auto n = parse_numbers(value, what);
      if (n.size() != 3) throw ConfigError(what + ": expected sx sy sz");
      s.spacing = {n[0], n[1], n[2]};
    } else if (key == "frames") {
      s.frames = static_cast<int>(parse_integer(value, what));
    } else if (key == "noise") {
      s.noise = parse_number(value, what);
    } else if (key == "noise_kind") {
      if (value == "gaussian") {
        s.noise_kind = NoiseKind::Gaussian;
      } else if (value == "uniform") {
        s.noise_kind = NoiseKind::Uniform;
      } else {
        throw ConfigError(what + ": expected 'gaussian' or 'uniform'");
      }
    } else if (key == "seed") {
      s.seed = static_cast<std::uint64_t>(parse_integer(value, what));
    } else if (key == "background") {
      s.background = parse_number(value, what);
    } else if (key == "nucleus") {
      if (tok.size() != 8 && tok.size() != 11 && tok.size() != 12) {
        throw ConfigError(what + ": expected 'name cx cy cz rx ry rz peak [vx vy vz [begin]]'");
      }
      EllipsoidSpec e;
      e.name = tok[0];
      e.center = triple(tok, 1, what);
      e.radii = triple(tok, 4, what);
      e.peak = parse_number(tok[7], what);
      if (tok.size() >= 11) e.drift = triple(tok, 8, what);
      if (tok.size() == 12) e.begin = static_cast<int>(parse_integer(tok[11], what));
      s.nuclei.push_back(e);
    } else if (key == "division") {
      if (tok.size() != 7 && tok.size() != 8) {
        throw ConfigError(what + ": expected 'frame parent child_a child_b dx dy dz [scale]'");
      }
      DivisionEvent d;
      d.frame = static_cast<int>(parse_integer(tok[0], what));
      d.parent = tok[1];
      d.child_a = tok[2];
      d.child_b = tok[3];
      d.offset = triple(tok, 4, what);
      if (tok.size() == 8) d.scale = parse_number(tok[7], what);
      s.divisions.push_back(d);
    } else if (key == "apoptosis") {
      if (tok.size() != 2) throw ConfigError(what + ": expected 'frame name'");
      s.apoptoses.push_back({static_cast<int>(parse_integer(tok[0], what)), tok[1]});
    } else {
      throw ConfigError(kv.source() + ": unknown script key '" + key + "'");
    }
  }
  return s;
}

SynthScript load_script(const std::filesystem::path& path) {
  return parse_script(KeyValueFile::load(path));
}

std::string to_text(const SynthScript& s) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto three = [&](const std::array<double, 3>& a) {
    return num(a[0]) + ' ' + num(a[1]) + ' ' + num(a[2]);
  };
  std::string o = "dims = " + std::to_string(s.dims.nx) + ' ' + std::to_string(s.dims.ny) + ' ' +
                  std::to_string(s.dims.nz) + '\n';
  o += "spacing = " + three({s.spacing.sx, s.spacing.sy, s.spacing.sz}) + '\n';
  o += "frames = " + std::to_string(s.frames) + '\n';
  o += "noise = " + num(s.noise) + '\n';
  o += std::string("noise_kind = ") +
       (s.noise_kind == NoiseKind::Gaussian ? "gaussian" : "uniform") + '\n';
  o += "seed = " + std::to_string(s.seed) + '\n';
  o += "background = " + num(s.background) + '\n';
  for (const auto& e : s.nuclei) {
    o += "nucleus = " + e.name + ' ' + three(e.center) + ' ' + three(e.radii) + ' ' + num(e.peak) +
         ' ' + three(e.drift) + ' ' + std::to_string(e.begin) + '\n';
  }
  for (const auto& d : s.divisions) {
    o += "division = " + std::to_string(d.frame) + ' ' + d.parent + ' ' + d.child_a + ' ' +
         d.child_b + ' ' + three(d.offset) + ' ' + num(d.scale) + '\n';
  }
  for (const auto& a : s.apoptoses) o += "apoptosis = " + std::to_string(a.frame) + ' ' + a.name + '\n';
  return o;
}

SynthSequence generate_sequence(const SynthScript& script) {
  try {
    validate_geometry(script.dims, script.spacing);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("synth script: ") + e.what());
  }
  if (script.frames < 1) throw ConfigError("synth script: frames must be >= 1");
  if (script.noise < 0) throw ConfigError("synth script: noise must be >= 0");
  const int last = script.frames - 1;

  std::vector<Instance> inst;
  std::map<std::string, std::size_t> by_name;
  auto add = [&](Instance i) {
    if (by_name.contains(i.name)) throw ConfigError("synth script: duplicate nucleus '" + i.name + "'");
    for (double r : i.radii) {
      if (!(r > 0)) throw ConfigError("synth script: radii of '" + i.name + "' must be positive");
    }
    if (i.begin < 0 || i.begin > last) {
      throw ConfigError("synth script: '" + i.name + "' begins outside the sequence");
    }
    i.order = inst.size();
    by_name[i.name] = inst.size();
    inst.push_back(std::move(i));
  };
  for (const EllipsoidSpec& e : script.nuclei) {
    add({e.name, e.center, e.radii, e.peak, e.drift, e.begin, last, "", 0});
  }

  struct Event {
    int frame;
    std::size_t order;
    const DivisionEvent* division;
    const ApoptosisEvent* apoptosis;
  };
  std::vector<Event> events;
  for (const auto& d : script.divisions) events.push_back({d.frame, events.size(), &d, nullptr});
  for (const auto& a : script.apoptoses) events.push_back({a.frame, events.size(), nullptr, &a});
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.frame < b.frame; });
  auto alive_before = [&](const std::string& name, int frame, const char* what) -> Instance& {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ConfigError(std::string("synth script: ") + what + " of unknown nucleus '" + name + "'");
    Instance& i = inst[it->second];
    if (frame < 1 || frame > last || i.begin > frame - 1 || i.end < frame - 1 || i.end != last) {
      throw ConfigError(std::string("synth script: ") + what + " of '" + name + "' at frame " +
                        std::to_string(frame) + " is not possible");
    }
    return i;
  };
  for (const Event& ev : events) {
    if (ev.apoptosis != nullptr) {
      alive_before(ev.apoptosis->name, ev.frame, "apoptosis").end = ev.frame - 1;
      continue;
    }
    const DivisionEvent& d = *ev.division;
    Instance& p = alive_before(d.parent, d.frame, "division");
    p.end = d.frame - 1;
    const Instance parent = p;  // `add` may reallocate
    const auto c = parent.center_at(d.frame);
    std::array<double, 3> radii{};
    for (int a = 0; a < 3; ++a) radii[static_cast<std::size_t>(a)] = parent.radii[static_cast<std::size_t>(a)] * d.scale;
    Instance ca{d.child_a, {c[0] - d.offset[0], c[1] - d.offset[1], c[2] - d.offset[2]}, radii,
                parent.peak, parent.drift, d.frame, last, parent.name, 0};
    Instance cb{d.child_b, {c[0] + d.offset[0], c[1] + d.offset[1], c[2] + d.offset[2]}, radii,
                parent.peak, parent.drift, d.frame, last, parent.name, 0};
    add(std::move(ca));
    add(std::move(cb));
  }

  // Track ids in (begin, declaration) order.
  std::vector<std::size_t> order(inst.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst[a].begin < inst[b].begin;
  });
  std::map<std::string, Label> id_of;
  for (std::size_t k = 0; k < order.size(); ++k) id_of[inst[order[k]].name] = static_cast<Label>(k + 1);

  SynthSequence seq;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Instance& i = inst[order[k]];
    seq.lineage.tracks.push_back(
        {static_cast<Label>(k + 1), i.begin, i.end, i.parent.empty() ? 0 : id_of.at(i.parent)});
  }

  const Dims d = script.dims;
  const Spacing sp = script.spacing;
  for (int t = 0; t <= last; ++t) {
    Volume img(d, sp, static_cast<float>(script.background));
    LabelVolume truth(d, sp);
    for (std::size_t k = 0; k < order.size(); ++k) {
      const Instance& i = inst[order[k]];
      if (t < i.begin || t > i.end) continue;
      const Label id = static_cast<Label>(k + 1);
      const auto c = i.center_at(t);
      const double s[3] = {sp.sx, sp.sy, sp.sz};
      const int len[3] = {d.nx, d.ny, d.nz};
      int lo[3], hi[3];
      for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        lo[a] = std::max(0, static_cast<int>(std::floor((c[ua] - i.radii[ua]) / s[a])));
        hi[a] = std::min(len[a] - 1, static_cast<int>(std::ceil((c[ua] + i.radii[ua]) / s[a])));
      }
      std::uint64_t covered = 0;
      for (int z = lo[2]; z <= hi[2]; ++z) {
        for (int y = lo[1]; y <= hi[1]; ++y) {
          for (int x = lo[0]; x <= hi[0]; ++x) {
            const double qx = (x * sp.sx - c[0]) / i.radii[0];
            const double qy = (y * sp.sy - c[1]) / i.radii[1];
            const double qz = (z * sp.sz - c[2]) / i.radii[2];
            const double q2 = qx * qx + qy * qy + qz * qz;
            if (q2 > 1.0) continue;
            Label& slot = truth(x, y, z);
            if (slot != 0) {
              throw ConfigError("synth script: nuclei overlap at frame " + std::to_string(t) +
                                " (track ids " + std::to_string(slot) + " and " +
                                std::to_string(id) + ")");
            }
            slot = id;
            img(x, y, z) = static_cast<float>(i.peak * (1.0 - 0.5 * q2));
            ++covered;
          }
        }
      }
      if (covered == 0) {
        throw ConfigError("synth script: nucleus '" + i.name + "' covers no voxel at frame " +
                          std::to_string(t));
      }
    }
    if (script.noise > 0) {
      std::seed_seq sseq{static_cast<std::uint32_t>(script.seed),
                         static_cast<std::uint32_t>(script.seed >> 32),
                         static_cast<std::uint32_t>(t)};
      std::mt19937_64 rng(sseq);
      std::normal_distribution<double> gauss(0.0, script.noise);
      std::uniform_real_distribution<double> uni(-script.noise, script.noise);
      for (float& v : img.data()) {
        const double n = script.noise_kind == NoiseKind::Gaussian ? gauss(rng) : uni(rng);
        v = static_cast<float>(std::clamp(v + n, 0.0, 1.0));
      }
    }
    seq.intensity.push_back(std::move(img));
    seq.truth.push_back(std::move(truth));
  }
  return seq;
}

void write_sequence(const SynthSequence& seq, const std::filesystem::path& out_dir) {
  const SequenceLayout raw = SequenceLayout::raw_images(out_dir / "01");
  const SequenceLayout tra = SequenceLayout::truth_tracking(out_dir / "01_GT");
  const SequenceLayout seg = SequenceLayout::truth_segmentation(out_dir / "01_GT");
  for (std::size_t t = 0; t < seq.intensity.size(); ++t) {
    const int i = static_cast<int>(t);
    write_volume_tiff_u16(raw.frame_path(i), seq.intensity[t]);
    write_label_tiff(tra.frame_path(i), seq.truth[t]);
    write_label_tiff(seg.frame_path(i), seq.truth[t]);
  }
  write_lineage(seq.lineage, tra.lineage_path());
}

}  // namespace svtrack
