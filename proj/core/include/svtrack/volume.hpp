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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace svtrack {

using Label = std::uint32_t;

struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  [[nodiscard]] std::size_t voxels() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Physical size of one voxel along each axis (microns).
struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  [[nodiscard]] double voxel_volume() const { return sx * sy * sz; }
  friend bool operator==(const Spacing&, const Spacing&) = default;
};

struct Index3 {
  int x = 0;
  int y = 0;
  int z = 0;
  friend bool operator==(const Index3&, const Index3&) = default;
};

std::string to_string(const Dims& d);

void validate_geometry(const Dims& dims, const Spacing& spacing);

/// Dense 3D grid, x fastest-varying, then y, then z.
template <typename T>
class Grid3 {
 public:
  using value_type = T;

  Grid3() = default;

  explicit Grid3(Dims dims, Spacing spacing = {}, T fill = T{})
      : dims_(dims), spacing_(spacing) {
    validate_geometry(dims_, spacing_);
    data_.assign(dims_.voxels(), fill);
  }

  Grid3(Dims dims, Spacing spacing, std::vector<T> data)
      : dims_(dims), spacing_(spacing), data_(std::move(data)) {
    validate_geometry(dims_, spacing_);
    if (data_.size() != dims_.voxels()) {
      throw std::invalid_argument("grid data length " +
                                  std::to_string(data_.size()) +
                                  " does not match dims " + to_string(dims_));
    }
  }

  /// Same dims and spacing, fresh storage.
  template <typename U>
  static Grid3 like(const Grid3<U>& other, T fill = T{}) {
    return Grid3(other.dims(), other.spacing(), fill);
  }

  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] const Spacing& spacing() const { return spacing_; }
  void set_spacing(Spacing s) {
    validate_geometry(dims_, s);
    spacing_ = s;
  }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * static_cast<std::size_t>(dims_.ny) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(dims_.nx) +
           static_cast<std::size_t>(x);
  }
  [[nodiscard]] std::size_t index(Index3 p) const { return index(p.x, p.y, p.z); }

  [[nodiscard]] Index3 coord(std::size_t i) const {
    const auto nx = static_cast<std::size_t>(dims_.nx);
    const auto ny = static_cast<std::size_t>(dims_.ny);
    return {static_cast<int>(i % nx), static_cast<int>((i / nx) % ny),
            static_cast<int>(i / (nx * ny))};
  }

  [[nodiscard]] bool contains(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < dims_.nx && y < dims_.ny &&
           z < dims_.nz;
  }

  T& operator()(int x, int y, int z) { return data_[index(x, y, z)]; }
  const T& operator()(int x, int y, int z) const { return data_[index(x, y, z)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  [[nodiscard]] std::span<T> data() { return data_; }
  [[nodiscard]] std::span<const T> data() const { return data_; }
  [[nodiscard]] std::vector<T>& storage() { return data_; }
  [[nodiscard]] const std::vector<T>& storage() const { return data_; }

  template <typename U>
  [[nodiscard]] bool same_geometry(const Grid3<U>& other) const {
    return dims_ == other.dims() && spacing_ == other.spacing();
  }

  friend bool operator==(const Grid3&, const Grid3&) = default;

 private:
  Dims dims_;
  Spacing spacing_;
  std::vector<T> data_;
};

/// Scalar volume: raw intensities or probabilities in [0,1].
using Volume = Grid3<float>;
/// Integer labels, 0 = background.
using LabelVolume = Grid3<Label>;
/// Binary mask, values in {0,1}.
using Mask = Grid3<std::uint8_t>;

enum class Connectivity : int { Face6 = 6, FaceEdge18 = 18, Full26 = 26 };

Connectivity connectivity_from_int(int n);

struct Offset {
  int dx;
  int dy;
  int dz;
};

/// Neighbor offsets (excluding the center) in a fixed z-major, then y, then x
/// order.
std::span<const Offset> neighbor_offsets(Connectivity conn);

/// Throws std::invalid_argument when any value is outside [0,1] or non-finite.
void check_probability_range(const Volume& v);

/// Rescales to [0,1] by (v - min) / (max - min); constant input maps to 0.
Volume normalize_min_max(const Volume& v);

/// Physical distance between two voxel coordinates.
double physical_distance(const Index3& a, const Index3& b, const Spacing& s);

/// Mask of voxels equal to `label`.
Mask mask_of(const LabelVolume& labels, Label label);

/// Mask of all nonzero voxels.
Mask foreground_of(const LabelVolume& labels);

}  // namespace svtrack
