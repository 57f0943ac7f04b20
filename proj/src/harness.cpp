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

#include "fptrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "fptrack/error.hpp"
#include "fptrack/tracker_ekf.hpp"
#include "fptrack/tracker_rbe.hpp"

namespace fptrack {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Rbe:
      return "rbe";
    case Scheme::Ekf:
      return "ekf";
    case Scheme::Exhaustive:
      return "exhaustive";
    case Scheme::SweepAround:
      return "sweep_around";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (scheme_name(s) == name) return s;
  }
  throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None:
      return "none";
    case SweepAxis::SigmaV:
      return "sigma_v";
    case SweepAxis::Budget:
      return "budget";
    case SweepAxis::Velocity:
      return "velocity";
  }
  return "unknown";
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::SigmaV, SweepAxis::Budget, SweepAxis::Velocity}) {
    if (axis_name(a) == name) return a;
  }
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

Offset SimConfig::velocity_cells() const {
  const double cells = velocity_mps * frame_interval_s / grid.resolution_m;
  const double rounded = std::round(cells);
  if (!std::isfinite(cells) || std::abs(cells - rounded) > 1e-6) {
    throw ConfigError("velocity " + std::to_string(velocity_mps) + " m/s x " +
                      std::to_string(frame_interval_s) + " s is not a whole number of " +
                      std::to_string(grid.resolution_m) + " m cells");
  }
  return Offset{static_cast<int>(rounded), 0};
}

MobilityModel SimConfig::mobility() const {
  return MobilityModel::isotropic(velocity_cells(), frame_interval_s, sigma_w);
}

BlockageModel SimConfig::blockage() const {
  BlockageModel b;
  b.alpha = alpha;
  b.sigma_v = sigma_v_db;
  b.blocked_gain_db = blocked_gain_db;
  b.shared_fading = shared_fading;
  return b;
}

void SimConfig::validate() const {
  try {
    grid.validate();
    codebook.validate();
    blockage().validate();
    mobility().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!grid.contains(initial_cell)) throw ConfigError("initial cell lies outside the grid");
  if (budget == 0 || budget > codebook.size()) throw ConfigError("budget must be in [1, M]");
  if (frames == 0) throw ConfigError("frames must be positive");
  if (runs == 0) throw ConfigError("runs must be positive");
  if (workers == 0) throw ConfigError("workers must be positive");
  if (ekf_initial_variance && !(*ekf_initial_variance >= 0.0)) {
    throw ConfigError("ekf_initial_variance must be non-negative");
  }
}

GapSeries gain_gap(const EpisodeRecord& record) {
  if (record.frames.empty()) throw std::invalid_argument("gain_gap: empty record");
  GapSeries out;
  out.per_frame.reserve(record.frames.size());
  double total = 0.0;
  for (const auto& f : record.frames) {
    const double gap = f.best_gain_db - f.chosen_gain_db;
    out.per_frame.push_back(gap);
    total += gap;
  }
  out.mean = total / static_cast<double>(record.frames.size());
  return out;
}

double coverage_ratio(const EpisodeRecord& record) {
  if (record.frames.empty()) throw std::invalid_argument("coverage_ratio: empty record");
  std::size_t covered = 0;
  for (const auto& f : record.frames) covered += f.best_trained ? 1 : 0;
  return static_cast<double>(covered) / static_cast<double>(record.frames.size());
}

void check_compatible(const SimConfig& config, const FingerprintDatabase& db) {
  const GridMap& g = db.grid();
  if (g.length_cells != config.grid.length_cells || g.width_cells != config.grid.width_cells ||
      std::abs(g.resolution_m - config.grid.resolution_m) > 1e-6 * config.grid.resolution_m) {
    throw ConfigError("fingerprint grid does not match the configured grid");
  }
  if (db.num_beams() != config.codebook.size()) {
    throw ConfigError("fingerprint codebook size does not match the configured codebook");
  }
}

FingerprintDatabase make_fingerprint(const SimConfig& config) {
  if (!config.fingerprint_path.empty()) {
    auto db = load(config.fingerprint_path);
    check_compatible(config, db);
    return db;
  }
  try {
    const auto scene = default_street_scene(config.grid);
    return generate_synthetic(scene.scene, config.grid, config.codebook, scene.mask);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::unique_ptr<TrackingScheme> make_scheme(Scheme scheme, const SimConfig& config,
                                            const FingerprintDatabase& db) {
  const Offset velocity = config.velocity_cells();
  switch (scheme) {
    case Scheme::Rbe: {
      auto initial = config.rbe_initial == InitialBelief::PointMass
                         ? LocationPmf::point_mass(db.grid(), config.initial_cell)
                         : LocationPmf::uniform(db.grid());
      return std::make_unique<RbeTracker>(db, build_transition_kernel(config.mobility()), velocity,
                                          config.blockage(), config.budget, std::move(initial));
    }
    case Scheme::Ekf: {
      EkfState initial;
      initial.location = Eigen::Vector2d(config.initial_cell.x1, config.initial_cell.x2);
      const double var = config.ekf_initial_variance.value_or(config.sigma_w * config.sigma_w);
      initial.covariance = var * Eigen::Matrix2d::Identity();
      return std::make_unique<EkfTracker>(db, velocity, config.sigma_w, config.blockage(),
                                          config.budget, initial);
    }
    case Scheme::Exhaustive:
    case Scheme::SweepAround: {
      // Baselines start aligned, matching the accurate initial location the trackers get.
      const auto row = db.row(config.initial_cell);
      const std::vector<double> start(row.begin(), row.end());
      const BeamIndex initial = argmax_beam(start);
      if (scheme == Scheme::Exhaustive) {
        return std::make_unique<ExhaustiveSweepScheme>(db.num_beams(), config.budget, initial,
                                                       config.exhaustive_mode);
      }
      return std::make_unique<SweepAroundScheme>(db.num_beams(), config.budget, initial);
    }
  }
  throw ConfigError("unknown scheme");
}

EpisodeRecord run_episode(const SimConfig& config, const FingerprintDatabase& db, Scheme scheme,
                          std::uint64_t seed) {
  config.validate();
  check_compatible(config, db);

  const MobilityModel mobility = config.mobility();
  const TransitionKernel kernel = build_transition_kernel(mobility);
  const BlockageModel blockage = config.blockage();
  auto tracker = make_scheme(scheme, config, db);

  std::seed_seq mobility_seed{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
  std::seed_seq channel_seed{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 2u};
  Rng mobility_rng(mobility_seed);
  Rng channel_rng(channel_seed);

  EpisodeRecord record;
  record.frames.reserve(config.frames);
  Cell cell = config.initial_cell;
  std::vector<TrainingResult> results;
  for (std::size_t t = 1; t <= config.frames; ++t) {
    cell = step_true_location(db.grid(), cell, mobility, kernel, mobility_rng);
    FrameRecord frame;
    frame.frame = static_cast<int>(t);
    frame.true_cell = cell;
    frame.training = tracker->plan_training();

    const ChannelRealization channel = realize_channel(db, cell, blockage, channel_rng, frame.frame);
    results.clear();
    for (BeamIndex b : frame.training) results.push_back({b, channel.gains_db.at(b.value)});
    frame.chosen = tracker->select_beam(results);

    frame.best = argmax_beam(channel.gains_db);
    frame.best_gain_db = channel.gains_db[frame.best.value];
    frame.chosen_gain_db = channel.gains_db.at(frame.chosen.value);
    frame.best_trained = std::find(frame.training.begin(), frame.training.end(), frame.best) !=
                         frame.training.end();
    frame.location_estimate = tracker->location_estimate();
    record.frames.push_back(std::move(frame));
  }
  if (const auto* rbe = dynamic_cast<const RbeTracker*>(tracker.get())) {
    record.underflow_frames = rbe->underflow_frames();
  }
  return record;
}

namespace {

struct RunSummary {
  double mean_gap = 0.0;
  double coverage = 0.0;
  std::vector<double> gaps;
};

}  // namespace

SampleStats summarize(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
  const double n = static_cast<double>(samples.size());
  double total = 0.0;
  for (double x : samples) total += x;
  SampleStats out;
  out.mean = total / n;
  if (samples.size() < 2) return out;
  double ss = 0.0;
  for (double x : samples) ss += (x - out.mean) * (x - out.mean);
  out.stderr_mean = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

MetricsRecord monte_carlo(const SimConfig& config, const FingerprintDatabase& db, Scheme scheme) {
  config.validate();
  check_compatible(config, db);

  std::vector<RunSummary> runs(config.runs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < runs.size(); r = next++) {
      try {
        const auto record = run_episode(config, db, scheme, config.seed_base + r);
        auto gap = gain_gap(record);
        runs[r] = RunSummary{gap.mean, coverage_ratio(record), std::move(gap.per_frame)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = runs.size();
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(config.workers, runs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MetricsRecord out;
  out.runs = runs.size();
  out.frames = config.frames;
  out.gap_series.assign(config.frames, 0.0);
  std::vector<double> gaps(runs.size());
  std::vector<double> coverage(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    gaps[r] = runs[r].mean_gap;
    coverage[r] = runs[r].coverage;
    for (std::size_t t = 0; t < config.frames; ++t) out.gap_series[t] += runs[r].gaps[t];
  }
  for (double& g : out.gap_series) g /= static_cast<double>(runs.size());
  const SampleStats gap_stats = summarize(gaps);
  const SampleStats coverage_stats = summarize(coverage);
  out.mean_gap_db = gap_stats.mean;
  out.stderr_gap_db = gap_stats.stderr_mean;
  out.coverage_ratio = coverage_stats.mean;
  out.stderr_coverage = coverage_stats.stderr_mean;
  return out;
}

SimConfig with_axis_value(SimConfig config, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::None:
      break;
    case SweepAxis::SigmaV:
      config.sigma_v_db = value;
      break;
    case SweepAxis::Budget:
      if (value < 1.0 || value != std::floor(value)) {
        throw ConfigError("budget axis values must be positive integers");
      }
      config.budget = static_cast<std::size_t>(value);
      break;
    case SweepAxis::Velocity:
      config.velocity_mps = value;
      break;
  }
  return config;
}

std::vector<SweepRow> sweep_experiment(const SimConfig& config, const FingerprintDatabase& db,
                                       SweepAxis axis, std::span<const double> values,
                                       std::span<const Scheme> schemes) {
  if (values.empty()) throw ConfigError("sweep needs at least one axis value");
  if (schemes.empty()) throw ConfigError("sweep needs at least one scheme");
  std::vector<SweepRow> rows;
  rows.reserve(values.size() * schemes.size());
  for (double value : values) {
    const SimConfig point = with_axis_value(config, axis, value);
    point.validate();
    for (Scheme scheme : schemes) {
      rows.push_back({scheme, axis, value, monte_carlo(point, db, scheme), point.seed_base});
    }
  }
  return rows;
}

void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.10g,%.6f,%.6f,%.6f,%zu,%zu,%" PRIu64 "\n",
                  std::string(scheme_name(r.scheme)).c_str(), std::string(axis_name(r.axis)).c_str(),
                  r.axis_value, r.metrics.mean_gap_db, r.metrics.stderr_gap_db, r.metrics.coverage_ratio,
                  r.metrics.runs, r.metrics.frames, r.seed_base);
    out << buf;
  }
}

}  // namespace fptrack
