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

#include "svtrack/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "svtrack/error.hpp"

namespace svtrack {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& source) {
  KeyValueFile kv;
  kv.source_ = source;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(source + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    kv.entries_.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  return parse(in, path.string());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->first == key) return it->second;
  }
  return std::nullopt;
}

std::vector<std::string> KeyValueFile::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (k == key) out.push_back(v);
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(tok, what));
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(what + ": '" + text + "' is not an integer");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(what + ": '" + text + "' is not a boolean");
}

PipelineConfig config_from(const KeyValueFile& kv) {
  PipelineConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto num = [](double& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = parse_number(v, k); };
  };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) {
      dst = static_cast<int>(parse_integer(v, k));
    };
  };
  auto flag = [](bool& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = parse_bool(v, k); };
  };
  auto conn = [](Connectivity& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) {
      try {
        dst = connectivity_from_int(static_cast<int>(parse_integer(v, k)));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(k + ": " + e.what());
      }
    };
  };
  bool conn_set = false;
  const std::map<std::string, Setter> setters{
      {"spacing",
       [&](const std::string& k, const std::string& v) {
         const auto n = parse_numbers(v, k);
         if (n.size() != 3 || !(n[0] > 0 && n[1] > 0 && n[2] > 0)) {
           throw ConfigError(k + ": expected three positive numbers");
         }
         c.spacing = {n[0], n[1], n[2]};
       }},
      {"connectivity",
       [&](const std::string& k, const std::string& v) {
         conn(c.conn)(k, v);
         conn_set = true;
       }},
      {"threads", integer(c.threads)},
      {"seed",
       [&](const std::string& k, const std::string& v) {
         c.seed = static_cast<std::uint64_t>(parse_integer(v, k));
       }},
      {"keep_intermediates", flag(c.keep_intermediates)},
      {"detection.radii",
       [&](const std::string& k, const std::string& v) { c.blob_radii = parse_numbers(v, k); }},
      {"detection.min_score", num(c.seed_min_score)},
      {"detection.min_separation", num(c.seed_min_separation)},
      {"detection.probability_dir",
       [&](const std::string&, const std::string& v) { c.probability_dir = v; }},
      {"watershed.levels", integer(c.watershed.level_quantization)},
      {"watershed.mask_threshold", num(c.watershed.mask_threshold)},
      {"watershed.label_unseeded", flag(c.watershed.label_unseeded_components)},
      {"slic.k", integer(c.slic.k)},
      {"slic.compactness", num(c.slic.compactness)},
      {"slic.max_iters", integer(c.slic.max_iters)},
      {"slic.enforce_connectivity", flag(c.slic.enforce_connectivity)},
      {"slic.tolerance", num(c.slic.tolerance)},
      {"slic.min_fragment",
       [&](const std::string& k, const std::string& v) {
         c.slic.min_fragment = static_cast<std::uint64_t>(parse_integer(v, k));
       }},
      {"correction.enabled", flag(c.correction_enabled)},
      {"graph.max_radius", integer(c.tracker.max_radius)},
      {"tracker.threshold", num(c.tracker.threshold)},
      {"tracker.division_radius", integer(c.tracker.division_radius)},
      {"aogm.ns", num(c.aogm.ns)},
      {"aogm.fn", num(c.aogm.fn)},
      {"aogm.fp", num(c.aogm.fp)},
      {"aogm.ed", num(c.aogm.ed)},
      {"aogm.ea", num(c.aogm.ea)},
      {"aogm.ec", num(c.aogm.ec)},
  };
  for (const auto& [key, value] : kv.entries()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(kv.source() + ": unknown config key '" + key + "'");
    it->second(key, value);
  }
  if (conn_set) {
    c.watershed.conn = c.conn;
    c.tracker.conn = c.conn;
  }
  try {
    validate(c.watershed);
    validate(c.slic);
    validate(c.tracker);
    c.aogm.validate();
    if (c.blob_radii.empty()) throw std::invalid_argument("detection.radii must not be empty");
    for (double r : c.blob_radii) {
      if (!(r > 0)) throw std::invalid_argument("detection.radii must be positive");
    }
    if (!(c.seed_min_score >= 0 && c.seed_min_score <= 1)) {
      throw std::invalid_argument("detection.min_score must lie in [0,1]");
    }
    if (c.threads < 1) throw std::invalid_argument("threads must be >= 1");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(kv.source() + ": " + e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from(KeyValueFile::load(path));
}

std::string to_text(const PipelineConfig& c) {
  std::ostringstream o;
  auto b = [](bool v) { return v ? "true" : "false"; };
  o << "spacing = " << fmt_double(c.spacing.sx) << ' ' << fmt_double(c.spacing.sy) << ' '
    << fmt_double(c.spacing.sz) << '\n';
  o << "connectivity = " << static_cast<int>(c.conn) << '\n';
  o << "threads = " << c.threads << '\n';
  o << "seed = " << c.seed << '\n';
  o << "keep_intermediates = " << b(c.keep_intermediates) << '\n';
  o << "\n[detection]\nradii =";
  for (double r : c.blob_radii) o << ' ' << fmt_double(r);
  o << "\nmin_score = " << fmt_double(c.seed_min_score) << '\n';
  o << "min_separation = " << fmt_double(c.seed_min_separation) << '\n';
  if (!c.probability_dir.empty()) o << "probability_dir = " << c.probability_dir << '\n';
  o << "\n[watershed]\nlevels = " << c.watershed.level_quantization << '\n';
  o << "mask_threshold = " << fmt_double(c.watershed.mask_threshold) << '\n';
  o << "label_unseeded = " << b(c.watershed.label_unseeded_components) << '\n';
  o << "\n[slic]\nk = " << c.slic.k << '\n';
  o << "compactness = " << fmt_double(c.slic.compactness) << '\n';
  o << "max_iters = " << c.slic.max_iters << '\n';
  o << "enforce_connectivity = " << b(c.slic.enforce_connectivity) << '\n';
  o << "tolerance = " << fmt_double(c.slic.tolerance) << '\n';
  o << "min_fragment = " << c.slic.min_fragment << '\n';
  o << "\n[correction]\nenabled = " << b(c.correction_enabled) << '\n';
  o << "\n[graph]\nmax_radius = " << c.tracker.max_radius << '\n';
  o << "\n[tracker]\nthreshold = " << fmt_double(c.tracker.threshold) << '\n';
  o << "division_radius = " << c.tracker.division_radius << '\n';
  o << "\n[aogm]\nns = " << fmt_double(c.aogm.ns) << "\nfn = " << fmt_double(c.aogm.fn)
    << "\nfp = " << fmt_double(c.aogm.fp) << "\ned = " << fmt_double(c.aogm.ed)
    << "\nea = " << fmt_double(c.aogm.ea) << "\nec = " << fmt_double(c.aogm.ec) << '\n';
  return o.str();
}

}  // namespace svtrack
