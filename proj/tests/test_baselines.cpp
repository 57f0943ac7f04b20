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

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "fptrack/baselines.hpp"

namespace fptrack {
namespace {

std::vector<std::size_t> values(const std::vector<BeamIndex>& beams) {
  std::vector<std::size_t> out;
  for (auto b : beams) out.push_back(b.value);
  return out;
}

ChannelRealization channel_with(std::vector<double> gains) {
  ChannelRealization ch;
  ch.gains_db = std::move(gains);
  ch.unblocked.assign(ch.gains_db.size(), 1);
  return ch;
}

std::vector<double> peak_at(std::size_t m, std::size_t best) {
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = -static_cast<double>(i > best ? i - best : best - i);
  return g;
}

TEST(SweepPeriod, CeilingOfBeamsOverBudget) {
  EXPECT_EQ(sweep_period(64, 4), 16u);
  EXPECT_EQ(sweep_period(64, 5), 13u);
  EXPECT_EQ(sweep_period(64, 64), 1u);
  EXPECT_THROW(sweep_period(64, 0), std::invalid_argument);
  EXPECT_THROW(sweep_period(64, 65), std::invalid_argument);
}

TEST(SweepAround, CentredWindowOffsets) {
  EXPECT_EQ(values(sweep_around_training_set(BeamIndex{10}, 4, 64)), (std::vector<std::size_t>{9, 10, 11, 12}));
  EXPECT_EQ(values(sweep_around_training_set(BeamIndex{10}, 5, 64)),
            (std::vector<std::size_t>{8, 9, 10, 11, 12}));
  EXPECT_EQ(values(sweep_around_training_set(BeamIndex{10}, 1, 64)), (std::vector<std::size_t>{10}));
  EXPECT_EQ(values(sweep_around_training_set(BeamIndex{10}, 2, 64)), (std::vector<std::size_t>{10, 11}));
}

TEST(SweepAround, WindowSlidesInwardAtEnds) {
  EXPECT_EQ(values(sweep_around_training_set(BeamIndex{0}, 4, 64)), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(values(sweep_around_training_set(BeamIndex{63}, 4, 64)),
            (std::vector<std::size_t>{60, 61, 62, 63}));
  EXPECT_EQ(values(sweep_around_training_set(BeamIndex{62}, 4, 64)),
            (std::vector<std::size_t>{60, 61, 62, 63}));
}

TEST(SweepAround, WindowAlwaysContainsCurrentAndHasBudgetSize) {
  for (std::size_t m : {1u, 2u, 7u, 64u}) {
    for (std::size_t t = 1; t <= m; ++t) {
      for (std::size_t c = 0; c < m; ++c) {
        const auto w = values(sweep_around_training_set(BeamIndex{c}, t, m));
        ASSERT_EQ(w.size(), t);
        EXPECT_NE(std::find(w.begin(), w.end(), c), w.end());
        for (std::size_t k = 1; k < w.size(); ++k) EXPECT_EQ(w[k], w[k - 1] + 1);
      }
    }
  }
}

TEST(SweepAround, FullBudgetEqualsExhaustiveFrame) {
  const auto ch = channel_with(peak_at(8, 5));
  BaselineState around{BaselineKind::SweepAroundCurrent, BeamIndex{0}, 0, {}};
  BaselineState sweep{BaselineKind::ExhaustiveSweep, BeamIndex{0}, 0, {}};
  const auto a = sweep_around_current_step(around, ch, 8, 8);
  const auto s = exhaustive_sweep_step(sweep, ch, 8, 8);
  EXPECT_EQ(a.training, s.training);
  EXPECT_EQ(a.chosen, s.chosen);
  EXPECT_EQ(a.chosen.value, 5u);
}

TEST(SweepAround, MovesToBestTrainedBeam) {
  BaselineState st{BaselineKind::SweepAroundCurrent, BeamIndex{10}, 0, {}};
  const auto step = sweep_around_current_step(st, channel_with(peak_at(64, 30)), 4, 64);
  EXPECT_EQ(step.chosen.value, 12u);
  EXPECT_EQ(st.current.value, 12u);
}

TEST(Exhaustive, SweepsEverySixteenFramesAndHolds) {
  BaselineState st{BaselineKind::ExhaustiveSweep, BeamIndex{3}, 0, {}};
  const auto first = exhaustive_sweep_step(st, channel_with(peak_at(64, 40)), 4, 64);
  EXPECT_EQ(first.training.size(), 64u);
  EXPECT_EQ(first.chosen.value, 40u);
  for (int t = 1; t < 16; ++t) {
    const auto step = exhaustive_sweep_step(st, channel_with(peak_at(64, 7)), 4, 64);
    EXPECT_TRUE(step.training.empty()) << t;
    EXPECT_EQ(step.chosen.value, 40u) << t;
    EXPECT_LT(st.counter, 16u);
  }
  const auto again = exhaustive_sweep_step(st, channel_with(peak_at(64, 7)), 4, 64);
  EXPECT_EQ(again.training.size(), 64u);
  EXPECT_EQ(again.chosen.value, 7u);
}

TEST(Exhaustive, RotationTrainsBudgetPerFrameAndCommitsAfterFullPass) {
  BaselineState st{BaselineKind::ExhaustiveSweep, BeamIndex{0}, 0, {}};
  const auto ch = channel_with(peak_at(10, 6));
  std::vector<std::size_t> seen;
  for (int t = 0; t < 3; ++t) {
    const auto step = exhaustive_sweep_step(st, ch, 4, 10, ExhaustiveMode::Rotation);
    EXPECT_LE(step.training.size(), 4u);
    for (auto b : step.training) seen.push_back(b.value);
    EXPECT_EQ(step.chosen.value, t < 2 ? 0u : 6u) << t;
  }
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
}

TEST(Exhaustive, AverageTrainingEqualsBudgetOverPeriod) {
  BaselineState st{BaselineKind::ExhaustiveSweep, BeamIndex{0}, 0, {}};
  std::size_t trained = 0;
  for (int t = 0; t < 16; ++t) {
    trained += exhaustive_training_set(st, 4, 64, ExhaustiveMode::FullSweep).size();
    st.counter = (st.counter + 1) % 16;
  }
  EXPECT_EQ(trained, 64u);
}

TEST(BaselineSchemes, StaticNoiselessConvergeAndHold) {
  const auto g = peak_at(64, 37);
  ExhaustiveSweepScheme ex(64, 4, BeamIndex{0});
  SweepAroundScheme sa(64, 4, BeamIndex{20});
  for (int t = 0; t < 40; ++t) {
    std::vector<TrainingResult> r;
    for (auto b : ex.plan_training()) r.push_back({b, g[b.value]});
    EXPECT_EQ(ex.select_beam(r).value, 37u);
    r.clear();
    for (auto b : sa.plan_training()) r.push_back({b, g[b.value]});
    const auto chosen = sa.select_beam(r).value;
    if (t >= 9) EXPECT_EQ(chosen, 37u) << t;
  }
  EXPECT_EQ(ex.name(), "exhaustive");
  EXPECT_EQ(sa.name(), "sweep_around");
  EXPECT_FALSE(ex.location_estimate().has_value());
}

}  // namespace
}  // namespace fptrack
