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
#include <vector>

#include "fptrack/mobility_channel.hpp"
#include "fptrack/scheme.hpp"

namespace fptrack {

enum class BaselineKind { ExhaustiveSweep, SweepAroundCurrent };

/// How the exhaustive scheme spends its budget.
enum class ExhaustiveMode {
  FullSweep,  // all M beams on one frame every ceil(M/T) frames, hold otherwise
  Rotation,   // T beams per frame cycling through the codebook
};

struct BaselineState {
  BaselineKind kind = BaselineKind::ExhaustiveSweep;
  BeamIndex current;
  std::size_t counter = 0;  // position within the sweep period
  std::vector<double> last_seen_db;  // rotation mode: latest measurement per beam
};

struct BaselineStep {
  std::vector<BeamIndex> training;
  BeamIndex chosen;
};

/// ceil(M / T).
std::size_t sweep_period(std::size_t num_beams, std::size_t budget);

/// Beams trained by the exhaustive scheme on the frame at state.counter.
std::vector<BeamIndex> exhaustive_training_set(const BaselineState& state, std::size_t budget,
                                               std::size_t num_beams, ExhaustiveMode mode);

/// Window of min(T, M) consecutive indices containing `current`, offsets
/// -(T-1)/2 .. T/2 (rounded toward the upper side for even T), slid inward at
/// the codebook ends.
std::vector<BeamIndex> sweep_around_training_set(BeamIndex current, std::size_t budget,
                                                 std::size_t num_beams);

/// One exhaustive-scheme frame: trains per the schedule, chooses the argmax of
/// the measured gains on sweep frames and holds the previous beam otherwise.
BaselineStep exhaustive_sweep_step(BaselineState& state, const ChannelRealization& channel,
                                   std::size_t budget, std::size_t num_beams,
                                   ExhaustiveMode mode = ExhaustiveMode::FullSweep);

/// One sweep-around frame: trains the window around the current beam and
/// moves to the best trained beam.
BaselineStep sweep_around_current_step(BaselineState& state, const ChannelRealization& channel,
                                       std::size_t budget, std::size_t num_beams);

class ExhaustiveSweepScheme final : public TrackingScheme {
 public:
  ExhaustiveSweepScheme(std::size_t num_beams, std::size_t budget, BeamIndex initial,
                        ExhaustiveMode mode = ExhaustiveMode::FullSweep);

  std::string_view name() const override { return "exhaustive"; }
  std::vector<BeamIndex> plan_training() override;
  BeamIndex select_beam(std::span<const TrainingResult> results) override;

  const BaselineState& state() const { return state_; }

 private:
  std::size_t num_beams_;
  std::size_t budget_;
  ExhaustiveMode mode_;
  BaselineState state_;
};

class SweepAroundScheme final : public TrackingScheme {
 public:
  SweepAroundScheme(std::size_t num_beams, std::size_t budget, BeamIndex initial);

  std::string_view name() const override { return "sweep_around"; }
  std::vector<BeamIndex> plan_training() override;
  BeamIndex select_beam(std::span<const TrainingResult> results) override;

  const BaselineState& state() const { return state_; }

 private:
  std::size_t num_beams_;
  std::size_t budget_;
  BaselineState state_;
};

}  // namespace fptrack
