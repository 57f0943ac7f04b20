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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fptrack {

/// Transmit x receive beam codebook over a uniform linear array.
///
/// The transmit array has one element per transmit beam and uses
/// progressive-phase (DFT-style) weights; beam k points at
/// sin(theta_k) = -1 + (2k + 1) / num_tx_beams. The receive side is a single
/// antenna by default; with num_rx_beams > 1 every transmit beam is paired
/// with each receive beam and receive beams are treated as isotropic.
struct CodebookConfig {
  std::uint32_t num_tx_beams = 64;
  std::uint32_t num_rx_beams = 1;
  double carrier_frequency_hz = 28e9;
  double element_spacing = 0.5;  // in wavelengths

  std::size_t size() const { return std::size_t{num_tx_beams} * num_rx_beams; }
  void validate() const;  // throws std::invalid_argument
  friend bool operator==(const CodebookConfig&, const CodebookConfig&) = default;
};

/// Index into the combined codebook, in [0, M).
struct BeamIndex {
  std::size_t value = 0;

  constexpr BeamIndex() = default;
  constexpr explicit BeamIndex(std::size_t v) : value(v) {}
  friend constexpr auto operator<=>(BeamIndex, BeamIndex) = default;
};

/// Transmit beam of a combined index (receive index varies fastest).
inline std::size_t tx_beam_of(const CodebookConfig& config, BeamIndex beam) {
  return beam.value / config.num_rx_beams;
}

/// Steering angles (radians) of the transmit beams, increasing in sin-angle.
std::vector<double> beam_steering_angles(const CodebookConfig& config);

/// Array factor |a(theta)^H w|^2 / M_t of one element spacing and element
/// count, as a function of sin(theta) - sin(theta_beam). Peak value is
/// num_elements.
double array_factor(std::uint32_t num_elements, double element_spacing, double sin_offset);

/// Linear power gain of `beam` toward `angle` (radians, in [-pi/2, pi/2]).
double steering_gain(const CodebookConfig& config, BeamIndex beam, double angle);

/// Same as steering_gain but takes the direction as sin(angle).
double steering_gain_sin(const CodebookConfig& config, BeamIndex beam, double sin_angle);

/// The `count` highest-scoring beams, best first. Ties go to the lower index.
std::vector<BeamIndex> select_top_beams(std::span<const double> scores, std::size_t count);

/// Highest-scoring beam, lowest index on ties. `scores` must be non-empty.
BeamIndex argmax_beam(std::span<const double> scores);

}  // namespace fptrack
