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
#include <span>
#include <utility>
#include <vector>

#include "fptrack/fingerprint.hpp"
#include "fptrack/mobility_channel.hpp"
#include "fptrack/scheme.hpp"

namespace fptrack {

/// Probability mass over every cell of a grid.
class LocationPmf {
 public:
  explicit LocationPmf(GridMap grid);  // all-zero; normalise before use
  LocationPmf(GridMap grid, std::vector<double> weights);  // normalises

  static LocationPmf point_mass(const GridMap& grid, Cell cell);
  static LocationPmf uniform(const GridMap& grid);

  const GridMap& grid() const { return grid_; }
  std::span<const double> probabilities() const { return p_; }
  std::span<double> probabilities() { return p_; }
  double at(Cell c) const { return p_.at(grid_.index(c)); }
  double total() const;

  /// Rescales to unit mass. Throws std::domain_error if the mass is not positive.
  void normalize();

  /// Half-open range [first, last) of x1 rows holding nonzero mass.
  std::pair<std::size_t, std::size_t> support_rows() const;

 private:
  GridMap grid_;
  std::vector<double> p_;
};

/// Probabilities below this are set to zero after each Bayes update. It is
/// far below any meaningful mass and keeps the active window from growing
/// with denormal tails.
inline constexpr double kPmfPruneFloor = 1e-200;

/// sigma_v used inside the likelihood is at least this (dB), so a noiseless
/// channel still yields a finite log-likelihood.
inline constexpr double kMinLikelihoodSigma = 1e-6;

/// Prior p_{t|t-1}: shift by the velocity, convolve with the error kernel,
/// fold out-of-grid mass onto the nearest boundary cell, renormalise.
LocationPmf rbe_predict(const LocationPmf& belief, const TransitionKernel& kernel, Offset velocity);

/// Expected gain alpha * sum_x g_i(x) p(x) of every beam.
std::vector<double> rbe_expected_gains(const LocationPmf& belief, const FingerprintDatabase& db,
                                       double alpha);

/// The `budget` beams with the largest expected gain, best first.
std::vector<BeamIndex> rbe_select_training(const LocationPmf& belief, const FingerprintDatabase& db,
                                           double alpha, std::size_t budget);

struct RbeUpdate {
  LocationPmf belief;
  bool underflow = false;  // posterior mass vanished; belief is the unchanged prior
};

/// Bayes update with the blockage-mixture likelihood over the trained beams.
RbeUpdate rbe_update(const LocationPmf& belief, std::span<const TrainingResult> training,
                     const FingerprintDatabase& db, const BlockageModel& blockage);

/// Posterior mean location in (fractional) cells.
std::array<double, 2> rbe_estimate_location(const LocationPmf& belief);

/// Trained beams echo their measurement; untrained beams get the expected gain.
std::vector<double> rbe_estimate_gains(const LocationPmf& belief, const FingerprintDatabase& db,
                                       double alpha, std::span<const TrainingResult> trained);

inline BeamIndex rbe_choose_beam(std::span<const double> estimated_gains) {
  return argmax_beam(estimated_gains);
}

class RbeTracker final : public TrackingScheme {
 public:
  RbeTracker(const FingerprintDatabase& db, TransitionKernel kernel, Offset velocity,
             BlockageModel blockage, std::size_t budget, LocationPmf initial);

  std::string_view name() const override { return "rbe"; }
  std::vector<BeamIndex> plan_training() override;
  BeamIndex select_beam(std::span<const TrainingResult> results) override;
  std::optional<std::array<double, 2>> location_estimate() const override;

  const LocationPmf& belief() const { return belief_; }
  const std::vector<double>& estimated_gains() const { return estimated_; }
  const std::vector<BeamIndex>& training_set() const { return training_; }
  int frame() const { return frame_; }
  std::size_t underflow_frames() const { return underflows_; }

 private:
  const FingerprintDatabase* db_;
  TransitionKernel kernel_;
  Offset velocity_;
  BlockageModel blockage_;
  std::size_t budget_;
  LocationPmf belief_;
  int frame_ = 0;
  std::vector<BeamIndex> training_;
  std::vector<double> estimated_;
  std::size_t underflows_ = 0;
};

}  // namespace fptrack
