// SPDX-License-Identifier: Apache-2.0
//
// fptrack: fingerprint-aided mmWave beam tracking simulator
// Copyright (C) 2026 The fptrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "fptrack/codebook.hpp"

namespace fptrack {

/// Grid cell, x1 along the street length and x2 across it.
struct Cell {
  int x1 = 0;
  int x2 = 0;
  friend constexpr bool operator==(Cell, Cell) = default;
  friend constexpr auto operator<=>(Cell, Cell) = default;
};

/// Rectangular area split into length_cells x width_cells square cells.
/// Cells are stored x1-major: index = x1 * width_cells + x2.
struct GridMap {
  std::uint32_t length_cells = 1000;
  std::uint32_t width_cells = 40;
  double resolution_m = 0.1;

  std::size_t num_cells() const { return std::size_t{length_cells} * width_cells; }
  bool contains(Cell c) const {
    return c.x1 >= 0 && c.x2 >= 0 && static_cast<std::uint32_t>(c.x1) < length_cells &&
           static_cast<std::uint32_t>(c.x2) < width_cells;
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.x1) * width_cells + static_cast<std::size_t>(c.x2);
  }
  Cell cell_at(std::size_t index) const {
    return Cell{static_cast<int>(index / width_cells), static_cast<int>(index % width_cells)};
  }
  /// Nearest in-grid cell to integer coordinates.
  Cell clamp(long x1, long x2) const;
  /// Centre of a cell in metres.
  std::array<double, 2> centre_m(Cell c) const {
    return {(c.x1 + 0.5) * resolution_m, (c.x2 + 0.5) * resolution_m};
  }
  void validate() const;  // throws std::invalid_argument

  friend bool operator==(const GridMap&, const GridMap&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Scatterer {
  Point2 position;
  double reflection_loss_db = 0.0;
};

/// Geometric scene used in place of ray-traced fingerprints. Path 0 is the
/// line-of-sight path; path k >= 1 is a single bounce off scatterers[k - 1].
///
/// Per-path linear gain is 10^((reference_gain_db - loss_db) / 10) / max(d, 1)^n,
/// with d the total path length in metres. The transmit array lies along the
/// direction array_axis_rad, so a path leaving along unit vector u enters the
/// array factor through sin(theta) = u . (cos axis, sin axis).
struct SceneConfig {
  Point2 bs_position{20.0, -8.0};
  std::vector<Scatterer> scatterers;
  double path_loss_exponent = 2.0;
  double reference_gain_db = 40.0;
  /// Floor for deep shadow, relative to the strongest gain in the generated table.
  double shadow_floor_rel_db = -40.0;
  /// Direction of the array axis (element 0 to element N-1), radians from +x.
  double array_axis_rad = 0.0;

  void validate() const;  // throws std::invalid_argument
};

/// Cells on which given paths are permanently obstructed.
class StaticBlockageMask {
 public:
  void block(std::size_t cell_index, std::size_t path) { blocked_.emplace(cell_index, path); }
  bool blocks(std::size_t cell_index, std::size_t path) const {
    return blocked_.contains({cell_index, path});
  }
  bool empty() const { return blocked_.empty(); }
  std::size_t size() const { return blocked_.size(); }

 private:
  std::set<std::pair<std::size_t, std::size_t>> blocked_;
};

/// Long-term per-beam gains g_i(x) in dB for every grid cell, stored as f32
/// cell-major and beam-minor.
class FingerprintDatabase {
 public:
  FingerprintDatabase(GridMap grid, CodebookConfig codebook, std::vector<float> gains_db);

  const GridMap& grid() const { return grid_; }
  const CodebookConfig& codebook() const { return codebook_; }
  std::size_t num_beams() const { return num_beams_; }

  /// Stored g_i(cell). Throws std::out_of_range for a cell outside the grid.
  double gain_at(BeamIndex beam, Cell cell) const;

  /// Per-axis finite difference of g_i in dB per cell: central in the
  /// interior, one-sided on the grid edge, zero along an axis of length 1.
  std::array<double, 2> gradient_at(BeamIndex beam, Cell cell) const;

  /// All M gains of one cell.
  std::span<const float> row(std::size_t cell_index) const {
    return std::span<const float>(gains_db_).subspan(cell_index * num_beams_, num_beams_);
  }
  std::span<const float> row(Cell cell) const;
  std::span<const float> gains() const { return gains_db_; }

  friend bool operator==(const FingerprintDatabase&, const FingerprintDatabase&) = default;

 private:
  GridMap grid_;
  CodebookConfig codebook_;
  std::size_t num_beams_;
  std::vector<float> gains_db_;
};

/// Synthesises g_i(x) = 10 log10(sum_p gain_p * steering_gain_i(departure_p)) from
/// the scene geometry, clamped to [floor, reference_gain_db + 10 log10(M_t)].
/// Deterministic.
/// Throws std::invalid_argument when a cell centre coincides with the BS.
FingerprintDatabase generate_synthetic(const SceneConfig& scene, const GridMap& grid,
                                       const CodebookConfig& codebook,
                                       const StaticBlockageMask& mask = {});

/// Street scene used by the harness: BS 10 m off the near curb at x = 25 m,
/// reflecting facades on both sides. Beam indices run against the direction of
/// travel. With `parked_vehicles`, a row of parked vehicles shadows some paths.
struct DefaultScene {
  SceneConfig scene;
  StaticBlockageMask mask;
};
DefaultScene default_street_scene(const GridMap& grid, bool parked_vehicles = false);

// Binary file: "CFPD", u32 version, u32 length_cells, u32 width_cells,
// f32 resolution_m, u32 M, then X*M f32 gains, all little-endian.
inline constexpr std::uint32_t kFingerprintFileVersion = 1;
inline constexpr std::size_t kFingerprintHeaderBytes = 24;

void save(const FingerprintDatabase& db, const std::filesystem::path& path);
FingerprintDatabase load(const std::filesystem::path& path);

}  // namespace fptrack
