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

#include "fptrack/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fptrack {

void CodebookConfig::validate() const {
  if (num_tx_beams == 0 || num_rx_beams == 0) {
    throw std::invalid_argument("codebook: beam counts must be positive");
  }
  if (!(element_spacing > 0.0) || !std::isfinite(element_spacing)) {
    throw std::invalid_argument("codebook: element spacing must be positive");
  }
  if (!(carrier_frequency_hz > 0.0)) {
    throw std::invalid_argument("codebook: carrier frequency must be positive");
  }
}

std::vector<double> beam_steering_angles(const CodebookConfig& config) {
  config.validate();
  const double n = config.num_tx_beams;
  std::vector<double> angles(config.num_tx_beams);
  for (std::uint32_t k = 0; k < config.num_tx_beams; ++k) {
    angles[k] = std::asin(-1.0 + (2.0 * k + 1.0) / n);
  }
  return angles;
}

double array_factor(std::uint32_t num_elements, double element_spacing, double sin_offset) {
  // |sum_m exp(j m psi)|^2 = sin^2(N psi / 2) / sin^2(psi / 2)
  const double n = num_elements;
  const double half_psi = std::numbers::pi * element_spacing * sin_offset;
  const double den = std::sin(half_psi);
  if (std::abs(den) < 1e-12) return n;  // grating or main lobe peak
  const double num = std::sin(n * half_psi);
  return (num * num) / (den * den) / n;
}

double steering_gain_sin(const CodebookConfig& config, BeamIndex beam, double sin_angle) {
  if (beam.value >= config.size()) throw std::out_of_range("steering_gain: beam index out of range");
  const double n = config.num_tx_beams;
  const double beam_sin = -1.0 + (2.0 * static_cast<double>(tx_beam_of(config, beam)) + 1.0) / n;
  return array_factor(config.num_tx_beams, config.element_spacing, sin_angle - beam_sin);
}

double steering_gain(const CodebookConfig& config, BeamIndex beam, double angle) {
  return steering_gain_sin(config, beam, std::sin(angle));
}

std::vector<BeamIndex> select_top_beams(std::span<const double> scores, std::size_t count) {
  if (count > scores.size()) {
    throw std::invalid_argument("training budget " + std::to_string(count) +
                                " exceeds codebook size " + std::to_string(scores.size()));
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                    });
  std::vector<BeamIndex> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.emplace_back(order[k]);
  return out;
}

BeamIndex argmax_beam(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax_beam: empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return BeamIndex{best};
}

}  // namespace fptrack
