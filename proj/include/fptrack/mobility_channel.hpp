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

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "fptrack/fingerprint.hpp"

namespace fptrack {

/// Per-frame random stream. Every Monte Carlo run owns its own engines.
using Rng = std::mt19937_64;

/// Integer displacement in cells.
struct Offset {
  int d1 = 0;
  int d2 = 0;
  friend constexpr bool operator==(Offset, Offset) = default;
};

/// Linear movement x_t = x_{t-1} + v dt + n_W on the grid.
struct MobilityModel {
  Offset velocity;                // v * dt, cells per frame
  double frame_interval_s = 0.02;
  double sigma_w = 1.0;           // cells; also sets the kernel truncation radius
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity() * 0.5;  // cells^2

  /// Covariance diag(sigma_w^2 / 2, sigma_w^2 / 2).
  static MobilityModel isotropic(Offset velocity, double frame_interval_s, double sigma_w);
  void validate() const;  // throws std::invalid_argument
};

/// Discretised zero-mean Gaussian over integer offsets. Offsets are in
/// row-major order over the square [-radius, radius]^2.
struct TransitionKernel {
  int radius = 0;
  std::vector<Offset> offsets;
  std::vector<double> probabilities;
};

struct BlockageModel {
  double alpha = 0.8;             // probability that a beam is NOT dynamically blocked
  double sigma_v = 6.0;           // small-scale fading std, dB
  double blocked_gain_db = 0.0;
  bool shared_fading = false;     // one fading draw per frame instead of one per beam

  void validate() const;  // throws std::invalid_argument
};

struct ChannelRealization {
  int frame = 0;
  Cell true_cell;
  std::vector<double> gains_db;   // gamma_i
  std::vector<std::uint8_t> unblocked;  // delta_i
};

/// Probability of each offset is the Gaussian mass of the unit square centred
/// on it, truncated to radius ceil(3 sigma_w) and renormalised. Zero
/// covariance (or sigma_w = 0) gives the point kernel {(0,0): 1}.
TransitionKernel build_transition_kernel(const MobilityModel& model);

/// Samples one kernel offset from a uniform draw.
Offset sample_offset(const TransitionKernel& kernel, Rng& rng);

/// clamp(cell + velocity + sampled offset).
Cell step_true_location(const GridMap& grid, Cell cell, const MobilityModel& model,
                        const TransitionKernel& kernel, Rng& rng);

/// gamma_i = delta_i g_i(cell) + (1 - delta_i) blocked + n_V with
/// delta_i ~ Bernoulli(alpha) and n_V ~ N(0, sigma_v^2).
ChannelRealization realize_channel(const FingerprintDatabase& db, Cell cell,
                                   const BlockageModel& blockage, Rng& rng, int frame = 0);

}  // namespace fptrack
