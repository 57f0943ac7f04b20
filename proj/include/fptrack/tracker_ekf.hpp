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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fptrack/fingerprint.hpp"
#include "fptrack/mobility_channel.hpp"
#include "fptrack/scheme.hpp"

namespace fptrack {

/// Point estimate of the user location (fractional cells) and its error covariance.
struct EkfState {
  Eigen::Vector2d location = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
  int frame = 0;
};

/// Cell nearest to a fractional location, clamped into the grid.
Cell nearest_cell(const GridMap& grid, const Eigen::Vector2d& location);

/// x' = clamp(x + v dt), P' = P + sigma_w^2 I.
EkfState ekf_predict(const EkfState& state, Offset velocity, double sigma_w, const GridMap& grid);

/// The `budget` beams with the largest alpha * g_i at the nearest cell.
std::vector<BeamIndex> ekf_select_training(const EkfState& state, const FingerprintDatabase& db,
                                           double alpha, std::size_t budget);

struct BlockageDecision {
  struct Entry {
    BeamIndex beam;
    bool unblocked = true;
    double threshold_db = 0.0;
  };
  std::vector<Entry> entries;

  /// Training results judged unblocked, in input order.
  std::vector<TrainingResult> effective(std::span<const TrainingResult> trained) const;
};

/// MAP choice between the unblocked component N(g, sigma_v^2) and the blocked
/// component N(b, sigma_v^2), weighted alpha : 1 - alpha. For g > b this is
/// gamma > (g + b)/2 - sigma_v^2 ln(alpha / (1 - alpha)) / (g - b). With g = b
/// the beam counts as unblocked iff gamma > b. `predicted_gains[k]` is the
/// fingerprint gain of `trained[k]` at the prior location.
BlockageDecision ekf_detect_blockage(std::span<const TrainingResult> trained,
                                     std::span<const double> predicted_gains, double alpha,
                                     double sigma_v, double blocked_db = 0.0);

/// Regulariser added to the innovation covariance when sigma_v = 0.
inline constexpr double kInnovationRegularizer = 1e-9;

/// Kalman measurement update with the effective training results.
///
/// The Jacobian rows are the fingerprint gradients at the nearest cell c to
/// the prior estimate. The measurement prediction linearises the fingerprint
/// around c: h_i(x) = g_i(c) + grad g_i(c) . (x - c), so an estimate that is
/// off-cell is not biased by the rounding. The posterior location is clamped
/// to the grid and P = (I - K J) P is symmetrised.
EkfState ekf_update(const EkfState& prior, std::span<const TrainingResult> effective,
                    const FingerprintDatabase& db, double sigma_v);

/// Trained beams echo their measurement; untrained beams get alpha * g_i at
/// the nearest cell to the posterior.
std::vector<double> ekf_estimate_gains(const EkfState& posterior, const FingerprintDatabase& db,
                                       double alpha, std::span<const TrainingResult> trained);

class EkfTracker final : public TrackingScheme {
 public:
  EkfTracker(const FingerprintDatabase& db, Offset velocity, double sigma_w, BlockageModel blockage,
             std::size_t budget, EkfState initial);

  std::string_view name() const override { return "ekf"; }
  std::vector<BeamIndex> plan_training() override;
  BeamIndex select_beam(std::span<const TrainingResult> results) override;
  std::optional<std::array<double, 2>> location_estimate() const override;

  const EkfState& state() const { return state_; }
  const BlockageDecision& last_decision() const { return decision_; }

 private:
  const FingerprintDatabase* db_;
  Offset velocity_;
  double sigma_w_;
  BlockageModel blockage_;
  std::size_t budget_;
  EkfState state_;
  BlockageDecision decision_;
};

}  // namespace fptrack
