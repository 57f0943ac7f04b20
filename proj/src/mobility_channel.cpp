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

#include "fptrack/mobility_channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fptrack {

MobilityModel MobilityModel::isotropic(Offset velocity, double frame_interval_s, double sigma_w) {
  MobilityModel m;
  m.velocity = velocity;
  m.frame_interval_s = frame_interval_s;
  m.sigma_w = sigma_w;
  m.covariance = Eigen::Matrix2d::Identity() * (sigma_w * sigma_w / 2.0);
  return m;
}

void MobilityModel::validate() const {
  if (!(frame_interval_s > 0.0)) throw std::invalid_argument("mobility: frame interval must be positive");
  if (!(sigma_w >= 0.0) || !std::isfinite(sigma_w)) {
    throw std::invalid_argument("mobility: sigma_w must be non-negative");
  }
  const double a = covariance(0, 0);
  const double b = covariance(0, 1);
  const double d = covariance(1, 1);
  if (!covariance.allFinite() || std::abs(b - covariance(1, 0)) > 1e-12 * (1.0 + std::abs(b))) {
    throw std::invalid_argument("mobility: covariance must be finite and symmetric");
  }
  if (a < 0.0 || d < 0.0 || a * d - b * b < -1e-12 * (1.0 + a * d)) {
    throw std::invalid_argument("mobility: covariance must be positive semidefinite");
  }
}

void BlockageModel::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("blockage: alpha must be in [0, 1]");
  if (!(sigma_v >= 0.0) || !std::isfinite(sigma_v)) {
    throw std::invalid_argument("blockage: sigma_v must be non-negative");
  }
  if (!std::isfinite(blocked_gain_db)) throw std::invalid_argument("blockage: blocked gain must be finite");
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// P(lo < X <= hi) for X ~ N(mean, sd^2); sd = 0 is a point mass.
double interval_probability(double lo, double hi, double mean, double sd) {
  if (sd <= 0.0) return (mean > lo && mean <= hi) ? 1.0 : 0.0;
  return normal_cdf((hi - mean) / sd) - normal_cdf((lo - mean) / sd);
}

// 32-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton.
struct GaussLegendre {
  static constexpr int kOrder = 32;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= kOrder; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

// Mass of N(0, cov) on [a1-1/2, a1+1/2] x [a2-1/2, a2+1/2].
double square_mass(const Eigen::Matrix2d& cov, int a1, int a2) {
  const double v1 = cov(0, 0);
  const double v2 = cov(1, 1);
  const double c = cov(0, 1);
  const double lo1 = a1 - 0.5, hi1 = a1 + 0.5;
  const double lo2 = a2 - 0.5, hi2 = a2 + 0.5;
  if (c == 0.0 || v1 == 0.0 || v2 == 0.0) {
    return interval_probability(lo1, hi1, 0.0, std::sqrt(v1)) *
           interval_probability(lo2, hi2, 0.0, std::sqrt(v2));
  }
  // Correlated: integrate the marginal of x1 against the conditional of x2.
  static const GaussLegendre gl;
  const double sd1 = std::sqrt(v1);
  const double cond_slope = c / v1;
  const double cond_sd = std::sqrt(std::max(v2 - c * c / v1, 0.0));
  const double half = 0.5 * (hi1 - lo1);
  const double mid = 0.5 * (hi1 + lo1);
  double total = 0.0;
  for (int k = 0; k < GaussLegendre::kOrder; ++k) {
    const double u = mid + half * gl.nodes[k];
    const double density = std::exp(-0.5 * u * u / v1) / (sd1 * std::sqrt(2.0 * std::numbers::pi));
    total += gl.weights[k] * density * interval_probability(lo2, hi2, cond_slope * u, cond_sd);
  }
  return total * half;
}

}  // namespace

TransitionKernel build_transition_kernel(const MobilityModel& model) {
  model.validate();
  TransitionKernel kernel;
  if (model.sigma_w == 0.0 || model.covariance.isZero(0.0)) {
    kernel.offsets = {Offset{0, 0}};
    kernel.probabilities = {1.0};
    return kernel;
  }
  kernel.radius = static_cast<int>(std::ceil(3.0 * model.sigma_w));
  const int r = kernel.radius;
  double total = 0.0;
  for (int a1 = -r; a1 <= r; ++a1) {
    for (int a2 = -r; a2 <= r; ++a2) {
      const double mass = square_mass(model.covariance, a1, a2);
      if (mass <= 0.0) continue;
      kernel.offsets.push_back({a1, a2});
      kernel.probabilities.push_back(mass);
      total += mass;
    }
  }
  if (!(total > 0.0)) throw std::invalid_argument("mobility: kernel has no mass inside its support");
  for (double& p : kernel.probabilities) p /= total;
  return kernel;
}

Offset sample_offset(const TransitionKernel& kernel, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double cumulative = 0.0;
  for (std::size_t k = 0; k < kernel.probabilities.size(); ++k) {
    cumulative += kernel.probabilities[k];
    if (u < cumulative) return kernel.offsets[k];
  }
  return kernel.offsets.back();
}

Cell step_true_location(const GridMap& grid, Cell cell, const MobilityModel& model,
                        const TransitionKernel& kernel, Rng& rng) {
  if (!grid.contains(cell)) throw std::out_of_range("step_true_location: cell outside grid");
  const Offset n = sample_offset(kernel, rng);
  return grid.clamp(long{cell.x1} + model.velocity.d1 + n.d1, long{cell.x2} + model.velocity.d2 + n.d2);
}

ChannelRealization realize_channel(const FingerprintDatabase& db, Cell cell,
                                   const BlockageModel& blockage, Rng& rng, int frame) {
  blockage.validate();
  const auto row = db.row(cell);
  const std::size_t m = db.num_beams();
  ChannelRealization out;
  out.frame = frame;
  out.true_cell = cell;
  out.gains_db.resize(m);
  out.unblocked.resize(m);

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> fading(0.0, 1.0);
  const double shared = blockage.shared_fading ? blockage.sigma_v * fading(rng) : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const bool clear = uniform(rng) < blockage.alpha;
    const double noise = blockage.shared_fading ? shared : blockage.sigma_v * fading(rng);
    out.unblocked[i] = clear ? 1 : 0;
    out.gains_db[i] = (clear ? static_cast<double>(row[i]) : blockage.blocked_gain_db) + noise;
  }
  return out;
}

}  // namespace fptrack
