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

#include "fptrack/tracker_rbe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "fptrack/kernels.hpp"

namespace fptrack {

LocationPmf::LocationPmf(GridMap grid) : grid_(grid), p_(grid.num_cells(), 0.0) {}

LocationPmf::LocationPmf(GridMap grid, std::vector<double> weights)
    : grid_(grid), p_(std::move(weights)) {
  if (p_.size() != grid_.num_cells()) throw std::invalid_argument("pmf: weight count != cell count");
  if (std::any_of(p_.begin(), p_.end(), [](double w) { return !(w >= 0.0) || !std::isfinite(w); })) {
    throw std::invalid_argument("pmf: weights must be finite and non-negative");
  }
  normalize();
}

LocationPmf LocationPmf::point_mass(const GridMap& grid, Cell cell) {
  if (!grid.contains(cell)) throw std::out_of_range("pmf: point mass outside grid");
  LocationPmf pmf(grid);
  pmf.p_[grid.index(cell)] = 1.0;
  return pmf;
}

LocationPmf LocationPmf::uniform(const GridMap& grid) {
  return LocationPmf(grid, std::vector<double>(grid.num_cells(), 1.0));
}

double LocationPmf::total() const { return kernels::sum(p_); }

void LocationPmf::normalize() {
  const double t = total();
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("pmf: cannot normalise zero mass");
  kernels::scale(1.0 / t, p_);
}

std::pair<std::size_t, std::size_t> LocationPmf::support_rows() const {
  const std::size_t w = grid_.width_cells;
  const std::size_t rows = grid_.length_cells;
  auto row_nonzero = [&](std::size_t r) {
    const double* base = p_.data() + r * w;
    return std::any_of(base, base + w, [](double v) { return v != 0.0; });
  };
  std::size_t first = 0;
  while (first < rows && !row_nonzero(first)) ++first;
  if (first == rows) return {0, 0};
  std::size_t last = rows;
  while (!row_nonzero(last - 1)) --last;
  return {first, last};
}

LocationPmf rbe_predict(const LocationPmf& belief, const TransitionKernel& kernel, Offset velocity) {
  const GridMap& grid = belief.grid();
  const long rows = grid.length_cells;
  const long cols = grid.width_cells;
  const auto [first, last] = belief.support_rows();
  LocationPmf out(grid);
  if (first == last) throw std::domain_error("rbe_predict: belief has no mass");

  // Scatter every source row into a padded plane wide enough that no
  // shifted offset leaves it, then fold the padding onto the boundary.
  const long margin2 = kernel.radius + std::abs(velocity.d2);
  const long prow_lo = static_cast<long>(first) + velocity.d1 - kernel.radius;  // grid coords
  const long prow_hi = static_cast<long>(last) + velocity.d1 + kernel.radius;   // exclusive
  const long pcols = cols + 2 * margin2;
  const long prows = prow_hi - prow_lo;
  std::vector<double> plane(static_cast<std::size_t>(prows * pcols), 0.0);

  const auto src = belief.probabilities();
  for (std::size_t r = first; r < last; ++r) {
    const std::span<const double> src_row = src.subspan(r * cols, static_cast<std::size_t>(cols));
    for (std::size_t k = 0; k < kernel.offsets.size(); ++k) {
      const Offset n = kernel.offsets[k];
      const long dest_row = static_cast<long>(r) + velocity.d1 + n.d1 - prow_lo;
      const long dest_col = velocity.d2 + n.d2 + margin2;
      kernels::axpy(kernel.probabilities[k], src_row,
                    std::span<double>(plane).subspan(static_cast<std::size_t>(dest_row * pcols + dest_col),
                                                     static_cast<std::size_t>(cols)));
    }
  }

  auto dest = out.probabilities();
  for (long pr = 0; pr < prows; ++pr) {
    const long x1 = std::clamp(pr + prow_lo, 0L, rows - 1);
    const double* prow = plane.data() + pr * pcols;
    double* drow = dest.data() + x1 * cols;
    for (long pc = 0; pc < pcols; ++pc) {
      if (prow[pc] == 0.0) continue;
      drow[std::clamp(pc - margin2, 0L, cols - 1)] += prow[pc];
    }
  }
  out.normalize();
  return out;
}

namespace {

// Cell range [begin, end) spanned by the support rows.
std::pair<std::size_t, std::size_t> support_cells(const LocationPmf& belief) {
  const auto [first, last] = belief.support_rows();
  const std::size_t w = belief.grid().width_cells;
  return {first * w, last * w};
}

void check_same_grid(const LocationPmf& belief, const FingerprintDatabase& db) {
  const GridMap& a = belief.grid();
  const GridMap& b = db.grid();
  if (a.length_cells != b.length_cells || a.width_cells != b.width_cells) {
    throw std::invalid_argument("belief grid does not match fingerprint grid");
  }
}

}  // namespace

std::vector<double> rbe_expected_gains(const LocationPmf& belief, const FingerprintDatabase& db,
                                       double alpha) {
  check_same_grid(belief, db);
  const std::size_t m = db.num_beams();
  const auto [begin, end] = support_cells(belief);
  std::vector<double> out(m, 0.0);
  kernels::accumulate_weighted_rows(belief.probabilities().subspan(begin, end - begin),
                                    db.gains().subspan(begin * m, (end - begin) * m), m, out);
  for (double& v : out) v *= alpha;
  return out;
}

std::vector<BeamIndex> rbe_select_training(const LocationPmf& belief, const FingerprintDatabase& db,
                                           double alpha, std::size_t budget) {
  if (budget > db.num_beams()) {
    throw std::invalid_argument("rbe_select_training: budget exceeds codebook size");
  }
  const auto scores = rbe_expected_gains(belief, db, alpha);
  return select_top_beams(scores, budget);
}

RbeUpdate rbe_update(const LocationPmf& belief, std::span<const TrainingResult> training,
                     const FingerprintDatabase& db, const BlockageModel& blockage) {
  check_same_grid(belief, db);
  if (training.empty()) throw std::invalid_argument("rbe_update: no training results");
  const std::size_t m = db.num_beams();
  for (const auto& t : training) {
    if (t.beam.value >= m) throw std::out_of_range("rbe_update: beam index out of range");
  }

  const auto [begin, end] = support_cells(belief);
  const std::size_t n = end - begin;
  const auto prior = belief.probabilities().subspan(begin, n);

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> loglik(n);
  for (std::size_t k = 0; k < n; ++k) loglik[k] = prior[k] > 0.0 ? 0.0 : kNegInf;

  const double sigma = std::max(blockage.sigma_v, kMinLikelihoodSigma);
  kernels::MixtureParams params;
  params.blocked_db = blockage.blocked_gain_db;
  params.inv_two_var = 1.0 / (2.0 * sigma * sigma);
  params.log_alpha = std::log(blockage.alpha);
  params.log_one_minus_alpha = std::log1p(-blockage.alpha);

  std::vector<double> column(n);
  for (const auto& t : training) {
    kernels::gather_strided(db.gains(), begin * m + t.beam.value, m, column);
    params.measured_db = t.gain_db;
    kernels::add_log_mixture(column, params, loglik);
  }

  const double shift = n == 0 ? kNegInf : *std::max_element(loglik.begin(), loglik.end());
  RbeUpdate result{belief, false};
  if (!std::isfinite(shift)) {
    result.underflow = true;
    return result;
  }
  auto post = result.belief.probabilities().subspan(begin, n);
  kernels::scale_by_exp(loglik, shift, post);
  const double total = kernels::sum(post);
  if (!(total > 0.0) || !std::isfinite(total)) {
    result.belief = belief;
    result.underflow = true;
    return result;
  }
  kernels::scale(1.0 / total, post);
  bool pruned = false;
  for (double& v : post) {
    if (v != 0.0 && v < kPmfPruneFloor) {
      v = 0.0;
      pruned = true;
    }
  }
  if (pruned) result.belief.normalize();
  return result;
}

std::array<double, 2> rbe_estimate_location(const LocationPmf& belief) {
  const GridMap& grid = belief.grid();
  const auto p = belief.probabilities();
  const auto [first, last] = belief.support_rows();
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t r = first; r < last; ++r) {
    for (std::size_t c = 0; c < grid.width_cells; ++c) {
      const double w = p[r * grid.width_cells + c];
      m1 += w * static_cast<double>(r);
      m2 += w * static_cast<double>(c);
    }
  }
  return {m1, m2};
}

std::vector<double> rbe_estimate_gains(const LocationPmf& belief, const FingerprintDatabase& db,
                                       double alpha, std::span<const TrainingResult> trained) {
  auto gains = rbe_expected_gains(belief, db, alpha);
  for (const auto& t : trained) gains.at(t.beam.value) = t.gain_db;
  return gains;
}

RbeTracker::RbeTracker(const FingerprintDatabase& db, TransitionKernel kernel, Offset velocity,
                       BlockageModel blockage, std::size_t budget, LocationPmf initial)
    : db_(&db),
      kernel_(std::move(kernel)),
      velocity_(velocity),
      blockage_(blockage),
      budget_(budget),
      belief_(std::move(initial)) {
  blockage_.validate();
  check_same_grid(belief_, db);
  if (budget_ == 0 || budget_ > db.num_beams()) {
    throw std::invalid_argument("RbeTracker: budget must be in [1, M]");
  }
}

std::vector<BeamIndex> RbeTracker::plan_training() {
  ++frame_;
  belief_ = rbe_predict(belief_, kernel_, velocity_);
  training_ = rbe_select_training(belief_, *db_, blockage_.alpha, budget_);
  return training_;
}

BeamIndex RbeTracker::select_beam(std::span<const TrainingResult> results) {
  if (!results.empty()) {
    auto update = rbe_update(belief_, results, *db_, blockage_);
    if (update.underflow) ++underflows_;
    belief_ = std::move(update.belief);
  }
  estimated_ = rbe_estimate_gains(belief_, *db_, blockage_.alpha, results);
  return rbe_choose_beam(estimated_);
}

std::optional<std::array<double, 2>> RbeTracker::location_estimate() const {
  return rbe_estimate_location(belief_);
}

}  // namespace fptrack
