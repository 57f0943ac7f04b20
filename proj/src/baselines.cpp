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

#include "fptrack/baselines.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace fptrack {

namespace {

void check_budget(std::size_t budget, std::size_t num_beams) {
  if (num_beams == 0 || budget == 0 || budget > num_beams) {
    throw std::invalid_argument("baseline: budget must be in [1, M]");
  }
}

std::vector<TrainingResult> measure(const ChannelRealization& channel,
                                    const std::vector<BeamIndex>& beams) {
  std::vector<TrainingResult> out;
  out.reserve(beams.size());
  for (BeamIndex b : beams) out.push_back({b, channel.gains_db.at(b.value)});
  return out;
}

// Best measured beam, lowest index on ties; `fallback` when nothing was measured.
BeamIndex best_measured(std::span<const TrainingResult> results, BeamIndex fallback) {
  if (results.empty()) return fallback;
  const TrainingResult* best = &results[0];
  for (const auto& r : results) {
    if (r.gain_db > best->gain_db || (r.gain_db == best->gain_db && r.beam < best->beam)) best = &r;
  }
  return best->beam;
}

}  // namespace

std::size_t sweep_period(std::size_t num_beams, std::size_t budget) {
  check_budget(budget, num_beams);
  return (num_beams + budget - 1) / budget;
}

std::vector<BeamIndex> exhaustive_training_set(const BaselineState& state, std::size_t budget,
                                               std::size_t num_beams, ExhaustiveMode mode) {
  const std::size_t period = sweep_period(num_beams, budget);
  std::vector<BeamIndex> out;
  if (mode == ExhaustiveMode::FullSweep) {
    if (state.counter % period == 0) {
      for (std::size_t i = 0; i < num_beams; ++i) out.emplace_back(i);
    }
    return out;
  }
  const std::size_t first = (state.counter % period) * budget;
  for (std::size_t i = first; i < std::min(first + budget, num_beams); ++i) out.emplace_back(i);
  return out;
}

std::vector<BeamIndex> sweep_around_training_set(BeamIndex current, std::size_t budget,
                                                 std::size_t num_beams) {
  check_budget(budget, num_beams);
  if (current.value >= num_beams) throw std::out_of_range("sweep_around: current beam out of range");
  const long width = static_cast<long>(budget);
  const long below = (width - 1) / 2;
  long first = static_cast<long>(current.value) - below;
  first = std::clamp(first, 0L, static_cast<long>(num_beams) - width);
  std::vector<BeamIndex> out;
  out.reserve(budget);
  for (long i = first; i < first + width; ++i) out.emplace_back(static_cast<std::size_t>(i));
  return out;
}

namespace {

BeamIndex exhaustive_choose(BaselineState& state, std::span<const TrainingResult> results,
                            std::size_t num_beams, std::size_t period, ExhaustiveMode mode) {
  if (mode == ExhaustiveMode::Rotation) {
    if (state.last_seen_db.size() != num_beams) {
      state.last_seen_db.assign(num_beams, -std::numeric_limits<double>::infinity());
    }
    for (const auto& r : results) state.last_seen_db.at(r.beam.value) = r.gain_db;
    // Keep the current beam until a full rotation has been observed.
    if (std::all_of(state.last_seen_db.begin(), state.last_seen_db.end(),
                    [](double v) { return v != -std::numeric_limits<double>::infinity(); })) {
      state.current = argmax_beam(state.last_seen_db);
    }
  } else {
    state.current = best_measured(results, state.current);
  }
  state.counter = (state.counter + 1) % period;
  return state.current;
}

}  // namespace

BaselineStep exhaustive_sweep_step(BaselineState& state, const ChannelRealization& channel,
                                   std::size_t budget, std::size_t num_beams, ExhaustiveMode mode) {
  const std::size_t period = sweep_period(num_beams, budget);
  BaselineStep step;
  step.training = exhaustive_training_set(state, budget, num_beams, mode);
  const auto results = measure(channel, step.training);
  step.chosen = exhaustive_choose(state, results, num_beams, period, mode);
  return step;
}

BaselineStep sweep_around_current_step(BaselineState& state, const ChannelRealization& channel,
                                       std::size_t budget, std::size_t num_beams) {
  BaselineStep step;
  step.training = sweep_around_training_set(state.current, budget, num_beams);
  state.current = best_measured(measure(channel, step.training), state.current);
  step.chosen = state.current;
  return step;
}

ExhaustiveSweepScheme::ExhaustiveSweepScheme(std::size_t num_beams, std::size_t budget,
                                             BeamIndex initial, ExhaustiveMode mode)
    : num_beams_(num_beams), budget_(budget), mode_(mode) {
  check_budget(budget, num_beams);
  if (initial.value >= num_beams) throw std::out_of_range("exhaustive: initial beam out of range");
  state_.kind = BaselineKind::ExhaustiveSweep;
  state_.current = initial;
}

std::vector<BeamIndex> ExhaustiveSweepScheme::plan_training() {
  return exhaustive_training_set(state_, budget_, num_beams_, mode_);
}

BeamIndex ExhaustiveSweepScheme::select_beam(std::span<const TrainingResult> results) {
  return exhaustive_choose(state_, results, num_beams_, sweep_period(num_beams_, budget_), mode_);
}

SweepAroundScheme::SweepAroundScheme(std::size_t num_beams, std::size_t budget, BeamIndex initial)
    : num_beams_(num_beams), budget_(budget) {
  check_budget(budget, num_beams);
  if (initial.value >= num_beams) throw std::out_of_range("sweep_around: initial beam out of range");
  state_.kind = BaselineKind::SweepAroundCurrent;
  state_.current = initial;
}

std::vector<BeamIndex> SweepAroundScheme::plan_training() {
  return sweep_around_training_set(state_.current, budget_, num_beams_);
}

BeamIndex SweepAroundScheme::select_beam(std::span<const TrainingResult> results) {
  state_.current = best_measured(results, state_.current);
  return state_.current;
}

}  // namespace fptrack
