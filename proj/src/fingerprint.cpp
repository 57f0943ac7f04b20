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

#include "fptrack/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <string>

#include "fptrack/error.hpp"

namespace fptrack {

Cell GridMap::clamp(long x1, long x2) const {
  return Cell{static_cast<int>(std::clamp<long>(x1, 0, static_cast<long>(length_cells) - 1)),
              static_cast<int>(std::clamp<long>(x2, 0, static_cast<long>(width_cells) - 1))};
}

void GridMap::validate() const {
  if (length_cells == 0 || width_cells == 0) {
    throw std::invalid_argument("grid: dimensions must be positive");
  }
  if (!(resolution_m > 0.0) || !std::isfinite(resolution_m)) {
    throw std::invalid_argument("grid: resolution must be positive");
  }
}

void SceneConfig::validate() const {
  if (!std::isfinite(bs_position.x) || !std::isfinite(bs_position.y)) {
    throw std::invalid_argument("scene: BS position must be finite");
  }
  if (!std::isfinite(array_axis_rad)) throw std::invalid_argument("scene: array axis must be finite");
  if (!std::isfinite(path_loss_exponent) || path_loss_exponent < 0.0) {
    throw std::invalid_argument("scene: path-loss exponent must be non-negative");
  }
  if (!std::isfinite(reference_gain_db) || !std::isfinite(shadow_floor_rel_db) ||
      shadow_floor_rel_db >= 0.0) {
    throw std::invalid_argument("scene: shadow floor must be below the peak gain");
  }
  for (const auto& s : scatterers) {
    if (!std::isfinite(s.reflection_loss_db) || s.reflection_loss_db < 0.0) {
      throw std::invalid_argument("scene: reflection loss must be non-negative");
    }
  }
}

FingerprintDatabase::FingerprintDatabase(GridMap grid, CodebookConfig codebook,
                                         std::vector<float> gains_db)
    : grid_(grid), codebook_(codebook), num_beams_(codebook.size()), gains_db_(std::move(gains_db)) {
  grid_.validate();
  codebook_.validate();
  // The file format carries the resolution as f32; keep memory and disk identical.
  grid_.resolution_m = static_cast<double>(static_cast<float>(grid_.resolution_m));
  if (gains_db_.size() != grid_.num_cells() * num_beams_) {
    throw std::invalid_argument("fingerprint: gain table size does not match grid x codebook");
  }
  if (!std::all_of(gains_db_.begin(), gains_db_.end(), [](float g) { return std::isfinite(g); })) {
    throw std::invalid_argument("fingerprint: gains must be finite");
  }
}

double FingerprintDatabase::gain_at(BeamIndex beam, Cell cell) const {
  if (!grid_.contains(cell)) throw std::out_of_range("fingerprint: cell outside grid");
  if (beam.value >= num_beams_) throw std::out_of_range("fingerprint: beam index out of range");
  return gains_db_[grid_.index(cell) * num_beams_ + beam.value];
}

std::span<const float> FingerprintDatabase::row(Cell cell) const {
  if (!grid_.contains(cell)) throw std::out_of_range("fingerprint: cell outside grid");
  return row(grid_.index(cell));
}

namespace {

double axis_difference(const FingerprintDatabase& db, BeamIndex beam, Cell cell, int axis) {
  const int extent = axis == 0 ? static_cast<int>(db.grid().length_cells)
                               : static_cast<int>(db.grid().width_cells);
  const int pos = axis == 0 ? cell.x1 : cell.x2;
  if (extent < 2) return 0.0;
  auto at = [&](int p) {
    Cell c = cell;
    (axis == 0 ? c.x1 : c.x2) = p;
    return db.gain_at(beam, c);
  };
  if (pos == 0) return at(1) - at(0);
  if (pos == extent - 1) return at(pos) - at(pos - 1);
  return (at(pos + 1) - at(pos - 1)) / 2.0;
}

}  // namespace

std::array<double, 2> FingerprintDatabase::gradient_at(BeamIndex beam, Cell cell) const {
  if (!grid_.contains(cell)) throw std::out_of_range("fingerprint: cell outside grid");
  return {axis_difference(*this, beam, cell, 0), axis_difference(*this, beam, cell, 1)};
}

namespace {

struct PathGeometry {
  double sin_departure;
  double length_m;
};

double distance(Point2 a, Point2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

PathGeometry departure(Point2 bs, Point2 first_hop, double axis_rad, double extra_length) {
  const double d = distance(bs, first_hop);
  const double along = (first_hop.x - bs.x) * std::cos(axis_rad) + (first_hop.y - bs.y) * std::sin(axis_rad);
  return {along / d, d + extra_length};
}

}  // namespace

FingerprintDatabase generate_synthetic(const SceneConfig& scene, const GridMap& grid,
                                       const CodebookConfig& codebook,
                                       const StaticBlockageMask& mask) {
  scene.validate();
  grid.validate();
  codebook.validate();

  const std::size_t m = codebook.size();
  const double peak_db = scene.reference_gain_db + 10.0 * std::log10(static_cast<double>(codebook.num_tx_beams));
  const double ref_linear = std::pow(10.0, scene.reference_gain_db / 10.0);

  for (const auto& s : scene.scatterers) {
    if (distance(scene.bs_position, s.position) < 1e-9) {
      throw std::invalid_argument("scene: scatterer coincides with the BS");
    }
  }

  // Linear gains first; the floor is relative to the strongest gain in the table.
  std::vector<double> linear(grid.num_cells() * m, 0.0);
  std::vector<PathGeometry> paths;
  std::vector<double> path_gain;
  double strongest = 0.0;
  for (std::size_t idx = 0; idx < grid.num_cells(); ++idx) {
    const auto centre = grid.centre_m(grid.cell_at(idx));
    const Point2 user{centre[0], centre[1]};
    if (distance(scene.bs_position, user) < 1e-9) {
      throw std::invalid_argument("scene: cell " + std::to_string(idx) +
                                  " coincides with the BS position");
    }

    paths.clear();
    path_gain.clear();
    const std::size_t num_paths = scene.scatterers.size() + 1;
    for (std::size_t p = 0; p < num_paths; ++p) {
      if (mask.blocks(idx, p)) continue;
      PathGeometry geo{};
      double loss_db = 0.0;
      if (p == 0) {
        geo = departure(scene.bs_position, user, scene.array_axis_rad, 0.0);
      } else {
        const auto& s = scene.scatterers[p - 1];
        geo = departure(scene.bs_position, s.position, scene.array_axis_rad, distance(s.position, user));
        loss_db = s.reflection_loss_db;
      }
      paths.push_back(geo);
      path_gain.push_back(ref_linear * std::pow(10.0, -loss_db / 10.0) /
                          std::pow(std::max(geo.length_m, 1.0), scene.path_loss_exponent));
    }

    double* cell_gains = linear.data() + idx * m;
    for (std::size_t p = 0; p < paths.size(); ++p) {
      for (std::size_t i = 0; i < m; ++i) {
        cell_gains[i] += path_gain[p] * steering_gain_sin(codebook, BeamIndex{i}, paths[p].sin_departure);
      }
    }
    strongest = std::max(strongest, *std::max_element(cell_gains, cell_gains + m));
  }

  const double top_db = strongest > 0.0 ? std::min(10.0 * std::log10(strongest), peak_db) : peak_db;
  const double floor_db = top_db + scene.shadow_floor_rel_db;
  std::vector<float> gains(linear.size());
  for (std::size_t k = 0; k < linear.size(); ++k) {
    const double db = linear[k] > 0.0 ? 10.0 * std::log10(linear[k]) : floor_db;
    gains[k] = static_cast<float>(std::clamp(db, floor_db, peak_db));
  }
  return FingerprintDatabase(grid, codebook, std::move(gains));
}

namespace {

struct Box {
  double x_min, x_max, y_min, y_max;
};

// Liang-Barsky clip of segment a->b against an axis-aligned box.
bool segment_hits_box(Point2 a, Point2 b, const Box& box) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - box.x_min, box.x_max - a.x, a.y - box.y_min, box.y_max - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double t = q[k] / p[k];
    if (p[k] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

DefaultScene default_street_scene(const GridMap& grid, bool parked_vehicles) {
  DefaultScene out;
  SceneConfig& scene = out.scene;
  scene.bs_position = {25.0, -10.0};
  scene.path_loss_exponent = 2.0;
  scene.reference_gain_db = 40.0;
  scene.shadow_floor_rel_db = -40.0;
  scene.array_axis_rad = std::numbers::pi;
  // Far facade 6 m beyond the street, near facade behind the BS side.
  for (double x : {5.0, 17.0, 29.0, 41.0, 53.0, 65.0, 77.0, 89.0}) {
    scene.scatterers.push_back({{x, 10.0}, 15.0});
  }
  for (double x : {12.0, 36.0, 60.0, 84.0}) {
    scene.scatterers.push_back({{x, -3.0}, 20.0});
  }
  if (!parked_vehicles) return out;

  // Parked vehicles along the near curb.
  const Box vehicles[] = {{27.0, 32.0, -2.0, -0.3}, {44.0, 49.0, -2.0, -0.3}, {70.0, 76.0, -2.0, -0.3}};
  const std::size_t num_paths = scene.scatterers.size() + 1;
  for (std::size_t idx = 0; idx < grid.num_cells(); ++idx) {
    const auto centre = grid.centre_m(grid.cell_at(idx));
    const Point2 user{centre[0], centre[1]};
    for (std::size_t p = 0; p < num_paths; ++p) {
      const Point2 hop = p == 0 ? user : scene.scatterers[p - 1].position;
      for (const auto& box : vehicles) {
        const bool hit = segment_hits_box(scene.bs_position, hop, box) ||
                         (p != 0 && segment_hits_box(hop, user, box));
        if (hit) {
          out.mask.block(idx, p);
          break;
        }
      }
    }
  }
  return out;
}

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) buf.push_back(static_cast<char>((v >> (8 * k)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

constexpr char kMagic[4] = {'C', 'F', 'P', 'D'};

}  // namespace

void save(const FingerprintDatabase& db, const std::filesystem::path& path) {
  std::string buf;
  const auto gains = db.gains();
  buf.reserve(kFingerprintHeaderBytes + gains.size() * 4);
  buf.append(kMagic, 4);
  put_u32(buf, kFingerprintFileVersion);
  put_u32(buf, db.grid().length_cells);
  put_u32(buf, db.grid().width_cells);
  put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(db.grid().resolution_m)));
  put_u32(buf, static_cast<std::uint32_t>(db.num_beams()));
  for (float g : gains) put_u32(buf, std::bit_cast<std::uint32_t>(g));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FingerprintIoError("cannot open '" + path.string() + "' for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FingerprintIoError("write failed for '" + path.string() + "'");
}

FingerprintDatabase load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FingerprintIoError("cannot open '" + path.string() + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());

  if (bytes.size() < kFingerprintHeaderBytes) {
    throw TruncatedFileError("'" + path.string() + "': file shorter than the header");
  }
  if (std::memcmp(p, kMagic, 4) != 0) {
    throw FingerprintIoError("'" + path.string() + "': not a fingerprint file (bad magic)");
  }
  const std::uint32_t version = get_u32(p + 4);
  if (version != kFingerprintFileVersion) {
    throw VersionMismatchError("'" + path.string() + "': unsupported version " +
                               std::to_string(version));
  }
  GridMap grid;
  grid.length_cells = get_u32(p + 8);
  grid.width_cells = get_u32(p + 12);
  const float resolution = std::bit_cast<float>(get_u32(p + 16));
  grid.resolution_m = resolution;
  const std::uint32_t m = get_u32(p + 20);
  if (grid.length_cells == 0 || grid.width_cells == 0 || m == 0 || !(resolution > 0.0f) ||
      !std::isfinite(resolution)) {
    throw DimensionMismatchError("'" + path.string() + "': header has invalid dimensions");
  }

  const std::size_t count = grid.num_cells() * m;
  const std::size_t payload = bytes.size() - kFingerprintHeaderBytes;
  if (payload / 4 < count) {
    throw TruncatedFileError("'" + path.string() + "': payload holds " + std::to_string(payload / 4) +
                             " gains, header declares " + std::to_string(count));
  }
  if (payload != count * 4) {
    throw DimensionMismatchError("'" + path.string() + "': " +
                                 std::to_string(payload - count * 4) +
                                 " trailing bytes after the declared table");
  }

  std::vector<float> gains(count);
  for (std::size_t k = 0; k < count; ++k) {
    gains[k] = std::bit_cast<float>(get_u32(p + kFingerprintHeaderBytes + 4 * k));
  }
  CodebookConfig codebook;
  codebook.num_tx_beams = m;
  codebook.num_rx_beams = 1;
  try {
    return FingerprintDatabase(grid, codebook, std::move(gains));
  } catch (const std::invalid_argument& e) {
    throw FingerprintIoError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace fptrack
