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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fptrack/baselines.hpp"
#include "fptrack/codebook.hpp"
#include "fptrack/fingerprint.hpp"
#include "fptrack/mobility_channel.hpp"
#include "fptrack/scheme.hpp"

namespace fptrack {

enum class Scheme { Rbe, Ekf, Exhaustive, SweepAround };

std::string_view scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);  // throws ConfigError
inline constexpr std::array<Scheme, 4> kAllSchemes{Scheme::Rbe, Scheme::Ekf, Scheme::Exhaustive,
                                                   Scheme::SweepAround};

enum class InitialBelief { PointMass, Uniform };

/// Everything one Monte Carlo experiment needs. Defaults follow the street
/// scenario: 100 m x 4 m at 0.1 m cells, 20 ms frames, 15 m/s along the
/// street, 64-beam codebook, 100 frames from cell (1, 20).
struct SimConfig {
  GridMap grid;
  CodebookConfig codebook;
  double frame_interval_s = 0.02;
  double velocity_mps = 15.0;
  double sigma_w = 1.0;
  double sigma_v_db = 6.0;
  double alpha = 0.8;
  double blocked_gain_db = 0.0;
  bool shared_fading = false;
  std::size_t budget = 5;
  std::size_t frames = 100;
  std::size_t runs = 1000;
  Cell initial_cell{1, 20};
  Scheme scheme = Scheme::Rbe;
  std::uint64_t seed_base = 1;
  std::string fingerprint_path;  // empty: synthesise the default street scene
  ExhaustiveMode exhaustive_mode = ExhaustiveMode::FullSweep;
  InitialBelief rbe_initial = InitialBelief::PointMass;
  std::optional<double> ekf_initial_variance;  // default sigma_w^2
  unsigned workers = 1;

  /// v dt / resolution along the street. Throws ConfigError unless it is an
  /// integer number of cells.
  Offset velocity_cells() const;
  MobilityModel mobility() const;
  BlockageModel blockage() const;
  void validate() const;  // throws ConfigError
};

// Flat "key = value" configuration; '#' starts a comment.
struct ConfigKey {
  std::string_view name;
  std::string_view help;
};
std::span<const ConfigKey> config_keys();
void apply_setting(SimConfig& config, std::string_view key, std::string_view value);
SimConfig parse_config_text(std::string_view text, SimConfig base = {});
SimConfig load_config_file(const std::filesystem::path& path, SimConfig base = {});

struct FrameRecord {
  int frame = 0;
  Cell true_cell;
  BeamIndex chosen;
  BeamIndex best;
  double chosen_gain_db = 0.0;
  double best_gain_db = 0.0;
  std::vector<BeamIndex> training;
  bool best_trained = false;
  std::optional<std::array<double, 2>> location_estimate;
};

struct EpisodeRecord {
  std::vector<FrameRecord> frames;
  std::size_t underflow_frames = 0;
};

struct GapSeries {
  std::vector<double> per_frame;
  double mean = 0.0;
};

/// max_i gamma_i(t) - gamma_{i*}(t) per frame and its mean. Throws
/// std::invalid_argument on an empty record.
GapSeries gain_gap(const EpisodeRecord& record);

/// Fraction of frames whose best beam was trained. Throws on an empty record.
double coverage_ratio(const EpisodeRecord& record);

struct SampleStats {
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample standard deviation / sqrt(n); 0 for n < 2
};
/// Mean and standard error of a sample. Throws std::invalid_argument if empty.
SampleStats summarize(std::span<const double> samples);

struct MetricsRecord {
  double mean_gap_db = 0.0;
  double stderr_gap_db = 0.0;  // standard error of the per-run mean gaps
  double coverage_ratio = 0.0;
  double stderr_coverage = 0.0;
  std::vector<double> gap_series;  // per-frame gap averaged over runs
  std::size_t runs = 0;
  std::size_t frames = 0;
};

/// The default street fingerprint for config.grid / config.codebook, or the
/// file at config.fingerprint_path. Throws ConfigError if the file's grid or
/// codebook does not match the config.
FingerprintDatabase make_fingerprint(const SimConfig& config);
void check_compatible(const SimConfig& config, const FingerprintDatabase& db);

std::unique_ptr<TrackingScheme> make_scheme(Scheme scheme, const SimConfig& config,
                                            const FingerprintDatabase& db);

/// One run: each frame the user moves, the scheme plans training, the channel
/// is realised at the true cell, the scheme consumes the measurements and
/// picks a beam. Mobility and channel draw from separate streams seeded from
/// `seed`, so every scheme sees the same trajectory and channel for a seed.
EpisodeRecord run_episode(const SimConfig& config, const FingerprintDatabase& db, Scheme scheme,
                          std::uint64_t seed);

/// Runs seeds seed_base .. seed_base + runs - 1 over config.workers threads
/// and aggregates in run order.
MetricsRecord monte_carlo(const SimConfig& config, const FingerprintDatabase& db, Scheme scheme);

enum class SweepAxis { None, SigmaV, Budget, Velocity };
std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);  // throws ConfigError

/// `config` with the axis set to `value`.
SimConfig with_axis_value(SimConfig config, SweepAxis axis, double value);

struct SweepRow {
  Scheme scheme = Scheme::Rbe;
  SweepAxis axis = SweepAxis::None;
  double axis_value = 0.0;
  MetricsRecord metrics;
  std::uint64_t seed_base = 0;
};

/// One row per (value, scheme), value-major.
std::vector<SweepRow> sweep_experiment(const SimConfig& config, const FingerprintDatabase& db,
                                       SweepAxis axis, std::span<const double> values,
                                       std::span<const Scheme> schemes);

inline constexpr std::string_view kCsvHeader =
    "scheme,axis_name,axis_value,mean_gap_db,stderr_gap_db,coverage_ratio,runs,frames,seed_base";
void write_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace fptrack
