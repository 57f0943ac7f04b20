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

#include "fptrack/tracker_ekf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace fptrack {

Cell nearest_cell(const GridMap& grid, const Eigen::Vector2d& location) {
  return grid.clamp(std::lround(location.x()), std::lround(location.y()));
}

namespace {

Eigen::Vector2d clamp_to_grid(const GridMap& grid, Eigen::Vector2d x) {
  x.x() = std::clamp(x.x(), 0.0, static_cast<double>(grid.length_cells - 1));
  x.y() = std::clamp(x.y(), 0.0, static_cast<double>(grid.width_cells - 1));
  return x;
}

Eigen::Matrix2d symmetrized(const Eigen::Matrix2d& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

EkfState ekf_predict(const EkfState& state, Offset velocity, double sigma_w, const GridMap& grid) {
  EkfState out = state;
  out.location = clamp_to_grid(grid, state.location + Eigen::Vector2d(velocity.d1, velocity.d2));
  out.covariance = symmetrized(state.covariance + sigma_w * sigma_w * Eigen::Matrix2d::Identity());
  out.frame = state.frame + 1;
  return out;
}

std::vector<BeamIndex> ekf_select_training(const EkfState& state, const FingerprintDatabase& db,
                                           double alpha, std::size_t budget) {
  if (budget > db.num_beams()) {
    throw std::invalid_argument("ekf_select_training: budget exceeds codebook size");
  }
  const auto row = db.row(nearest_cell(db.grid(), state.location));
  std::vector<double> scores(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) scores[i] = alpha * static_cast<double>(row[i]);
  return select_top_beams(scores, budget);
}

std::vector<TrainingResult> BlockageDecision::effective(std::span<const TrainingResult> trained) const {
  std::vector<TrainingResult> out;
  for (const auto& t : trained) {
    const auto it = std::find_if(entries.begin(), entries.end(),
                                 [&](const Entry& e) { return e.beam == t.beam; });
    if (it != entries.end() && it->unblocked) out.push_back(t);
  }
  return out;
}

BlockageDecision ekf_detect_blockage(std::span<const TrainingResult> trained,
                                     std::span<const double> predicted_gains, double alpha,
                                     double sigma_v, double blocked_db) {
  if (trained.size() != predicted_gains.size()) {
    throw std::invalid_argument("ekf_detect_blockage: one predicted gain per trained beam");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  BlockageDecision decision;
  decision.entries.reserve(trained.size());
  for (std::size_t k = 0; k < trained.size(); ++k) {
    // Work relative to the blocked mean so the decision reduces to the b = 0 case.
    const double g = predicted_gains[k] - blocked_db;
    const double gamma = trained[k].gain_db - blocked_db;
    BlockageDecision::Entry e{trained[k].beam, true, 0.0};
    if (alpha >= 1.0) {
      e.threshold_db = -kInf;
      e.unblocked = true;
    } else if (alpha <= 0.0) {
      e.threshold_db = kInf;
      e.unblocked = false;
    } else if (g == 0.0) {
      // Both components share the mean; fall back to the sign of the measurement.
      e.threshold_db = 0.0;
      e.unblocked = gamma > 0.0;
    } else {
      e.threshold_db = g / 2.0 - sigma_v * sigma_v * std::log(alpha / (1.0 - alpha)) / g;
      // Multiplying through by g flips the comparison for negative gains.
      e.unblocked = g > 0.0 ? gamma > e.threshold_db : gamma < e.threshold_db;
    }
    e.threshold_db += blocked_db;
    decision.entries.push_back(e);
  }
  return decision;
}

EkfState ekf_update(const EkfState& prior, std::span<const TrainingResult> effective,
                    const FingerprintDatabase& db, double sigma_v) {
  if (effective.empty()) return prior;
  const GridMap& grid = db.grid();
  const Cell c = nearest_cell(grid, prior.location);
  const Eigen::Vector2d cell_pos(c.x1, c.x2);
  const auto k = static_cast<Eigen::Index>(effective.size());

  Eigen::MatrixXd jac(k, 2);
  Eigen::VectorXd innovation(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto& t = effective[static_cast<std::size_t>(r)];
    const auto grad = db.gradient_at(t.beam, c);
    jac(r, 0) = grad[0];
    jac(r, 1) = grad[1];
    const double predicted = db.gain_at(t.beam, c) + jac.row(r).dot(prior.location - cell_pos);
    innovation(r) = t.gain_db - predicted;
  }

  const Eigen::Matrix2d& p = prior.covariance;
  Eigen::MatrixXd s = jac * p * jac.transpose();
  const double noise = sigma_v * sigma_v;
  s.diagonal().array() += noise > 0.0 ? noise : kInnovationRegularizer;
  // K = P J^T S^-1, via S K^T = J P (S and P symmetric).
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  const Eigen::MatrixXd gain = ldlt.solve(jac * p).transpose();

  EkfState out = prior;
  out.location = clamp_to_grid(grid, prior.location + gain * innovation);
  out.covariance = symmetrized((Eigen::Matrix2d::Identity() - gain * jac) * p);
  return out;
}

std::vector<double> ekf_estimate_gains(const EkfState& posterior, const FingerprintDatabase& db,
                                       double alpha, std::span<const TrainingResult> trained) {
  const auto row = db.row(nearest_cell(db.grid(), posterior.location));
  std::vector<double> gains(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) gains[i] = alpha * static_cast<double>(row[i]);
  for (const auto& t : trained) gains.at(t.beam.value) = t.gain_db;
  return gains;
}

EkfTracker::EkfTracker(const FingerprintDatabase& db, Offset velocity, double sigma_w,
                       BlockageModel blockage, std::size_t budget, EkfState initial)
    : db_(&db),
      velocity_(velocity),
      sigma_w_(sigma_w),
      blockage_(blockage),
      budget_(budget),
      state_(std::move(initial)) {
  blockage_.validate();
  if (budget_ == 0 || budget_ > db.num_beams()) {
    throw std::invalid_argument("EkfTracker: budget must be in [1, M]");
  }
}

std::vector<BeamIndex> EkfTracker::plan_training() {
  state_ = ekf_predict(state_, velocity_, sigma_w_, db_->grid());
  return ekf_select_training(state_, *db_, blockage_.alpha, budget_);
}

BeamIndex EkfTracker::select_beam(std::span<const TrainingResult> results) {
  const Cell prior_cell = nearest_cell(db_->grid(), state_.location);
  std::vector<double> predicted(results.size());
  for (std::size_t k = 0; k < results.size(); ++k) predicted[k] = db_->gain_at(results[k].beam, prior_cell);
  decision_ = ekf_detect_blockage(results, predicted, blockage_.alpha, blockage_.sigma_v,
                                  blockage_.blocked_gain_db);
  state_ = ekf_update(state_, decision_.effective(results), *db_, blockage_.sigma_v);
  return argmax_beam(ekf_estimate_gains(state_, *db_, blockage_.alpha, results));
}

std::optional<std::array<double, 2>> EkfTracker::location_estimate() const {
  return std::array<double, 2>{state_.location.x(), state_.location.y()};
}

}  // namespace fptrack
