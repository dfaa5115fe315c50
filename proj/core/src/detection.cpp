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

#include "svtrack/detection.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "svtrack/ctc_io.hpp"
#include "svtrack/error.hpp"

namespace svtrack {
namespace {

std::vector<double> gaussian_kernel(double sigma_voxels) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_voxels)));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-0.5 * (i * i) / (sigma_voxels * sigma_voxels));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

// Convolves along one axis (0=x, 1=y, 2=z) with clamped indices.
void convolve_axis(std::vector<double>& data, const Dims& d, int axis,
                   const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  const int len = axis == 0 ? d.nx : axis == 1 ? d.ny : d.nz;
  const std::size_t stride = axis == 0   ? 1
                             : axis == 1 ? static_cast<std::size_t>(d.nx)
                                         : static_cast<std::size_t>(d.nx) * d.ny;
  std::vector<double> line(static_cast<std::size_t>(len));
  const std::size_t total = d.voxels();
  for (std::size_t base = 0; base < total; ++base) {
    // `base` must be the first element of a line along `axis`.
    if ((base / stride) % static_cast<std::size_t>(len) != 0) continue;
    for (int i = 0; i < len; ++i) line[static_cast<std::size_t>(i)] = data[base + i * stride];
    for (int i = 0; i < len; ++i) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int j = std::clamp(i + k, 0, len - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * line[static_cast<std::size_t>(j)];
      }
      data[base + i * stride] = acc;
    }
  }
}

std::vector<double> smooth(const Volume& v, double sigma_microns) {
  std::vector<double> data(v.data().begin(), v.data().end());
  const double spacing[3] = {v.spacing().sx, v.spacing().sy, v.spacing().sz};
  for (int axis = 0; axis < 3; ++axis) {
    const double sigma_vox = sigma_microns / spacing[axis];
    if (sigma_vox < 0.2) continue;  // narrower than a voxel: no-op
    convolve_axis(data, v.dims(), axis, gaussian_kernel(sigma_vox));
  }
  return data;
}

}  // namespace

Volume load_probability_map(const std::filesystem::path& path,
                            const Spacing& fallback_spacing) {
  TiffStack s = read_tiff_stack(path);
  std::vector<float> data(s.values.size());
  if (s.kind == SampleKind::Float) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(s.values[i]);
  } else {
    const double max_value = std::ldexp(1.0, s.bits_per_sample) - 1.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      data[i] = static_cast<float>(s.values[i] / max_value);
    }
  }
  Volume v(s.dims, s.spacing.value_or(fallback_spacing), std::move(data));
  try {
    check_probability_range(v);
  } catch (const std::invalid_argument&) {
    throw IoError("probability map '" + path.string() + "' has values outside [0,1]");
  }
  return v;
}

Volume gaussian_smooth(const Volume& v, double sigma_microns) {
  if (!(sigma_microns > 0.0)) return v;
  const std::vector<double> data = smooth(v, sigma_microns);
  return Volume(v.dims(), v.spacing(), std::vector<float>(data.begin(), data.end()));
}

Volume blob_probability_map(const Volume& intensity, const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("blob detector needs at least one scale");
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("blob radii must be positive");
  }
  Volume out = Volume::like(intensity);
  const auto [lo, hi] = std::minmax_element(intensity.data().begin(), intensity.data().end());
  if (!(*hi > *lo)) {
    spdlog::warn("blob detector: constant input volume, returning an all-zero map");
    return out;
  }
  const Dims d = intensity.dims();
  const Spacing sp = intensity.spacing();
  std::vector<double> best(intensity.size(), 0.0);
  for (double r : radii) {
    const double sigma = r / std::sqrt(3.0);
    const std::vector<double> g = smooth(intensity, sigma);
    auto at = [&](int x, int y, int z) {
      x = std::clamp(x, 0, d.nx - 1);
      y = std::clamp(y, 0, d.ny - 1);
      z = std::clamp(z, 0, d.nz - 1);
      return g[intensity.index(x, y, z)];
    };
    std::size_t i = 0;
    for (int z = 0; z < d.nz; ++z) {
      for (int y = 0; y < d.ny; ++y) {
        for (int x = 0; x < d.nx; ++x, ++i) {
          const double c = 2.0 * g[i];
          double lap = 0.0;
          if (d.nx > 1) lap += (at(x - 1, y, z) + at(x + 1, y, z) - c) / (sp.sx * sp.sx);
          if (d.ny > 1) lap += (at(x, y - 1, z) + at(x, y + 1, z) - c) / (sp.sy * sp.sy);
          if (d.nz > 1) lap += (at(x, y, z - 1) + at(x, y, z + 1) - c) / (sp.sz * sp.sz);
          best[i] = std::max(best[i], -sigma * sigma * lap);
        }
      }
    }
  }
  const double peak = *std::max_element(best.begin(), best.end());
  if (!(peak > 0.0)) {
    spdlog::warn("blob detector: no positive blob response");
    return out;
  }
  for (std::size_t i = 0; i < best.size(); ++i) {
    out[i] = static_cast<float>(std::clamp(best[i] / peak, 0.0, 1.0));
  }
  return out;
}

SeedSet extract_seeds(const Volume& prob, double min_score, double min_separation) {
  if (!(min_score >= 0.0 && min_score <= 1.0)) {
    throw std::invalid_argument("min_score must lie in [0,1]");
  }
  const Dims d = prob.dims();
  const auto offsets = neighbor_offsets(Connectivity::Full26);
  SeedSet candidates;
  std::size_t i = 0;
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x, ++i) {
        const float p = prob[i];
        if (!(p > 0.0f) || p < min_score) continue;
        bool is_max = true;
        for (const Offset& o : offsets) {
          const int nx = x + o.dx, ny = y + o.dy, nz = z + o.dz;
          if (!prob.contains(nx, ny, nz)) continue;
          if (prob(nx, ny, nz) > p) {
            is_max = false;
            break;
          }
        }
        if (is_max) candidates.push_back({{x, y, z}, p});
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Seed& a, const Seed& b) { return a.score > b.score; });
  if (!(min_separation > 0.0)) return candidates;

  // Spatial hash with cells of edge min_separation: conflicts can only come
  // from the 27 surrounding cells.
  const Spacing sp = prob.spacing();
  auto cell_of = [&](const Index3& p) {
    return std::make_tuple(static_cast<long>(std::floor(p.x * sp.sx / min_separation)),
                           static_cast<long>(std::floor(p.y * sp.sy / min_separation)),
                           static_cast<long>(std::floor(p.z * sp.sz / min_separation)));
  };
  auto key = [](long a, long b, long c) {
    return (static_cast<std::uint64_t>(a) * 73856093u) ^
           (static_cast<std::uint64_t>(b) * 19349663u) ^
           (static_cast<std::uint64_t>(c) * 83492791u);
  };
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
  SeedSet kept;
  for (const Seed& s : candidates) {
    const auto [cx, cy, cz] = cell_of(s.position);
    bool ok = true;
    for (long dz = -1; dz <= 1 && ok; ++dz) {
      for (long dy = -1; dy <= 1 && ok; ++dy) {
        for (long dx = -1; dx <= 1 && ok; ++dx) {
          auto it = grid.find(key(cx + dx, cy + dy, cz + dz));
          if (it == grid.end()) continue;
          for (std::size_t k : it->second) {
            if (physical_distance(kept[k].position, s.position, sp) < min_separation) {
              ok = false;
              break;
            }
          }
        }
      }
    }
    if (!ok) continue;
    grid[key(cx, cy, cz)].push_back(kept.size());
    kept.push_back(s);
  }
  return kept;
}

}  // namespace svtrack
