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

#include <cmath>
#include <random>
#include <vector>

#include "fptrack/tracker_rbe.hpp"
#include "oracle_filters.hpp"

namespace fptrack {
namespace {

// Two-term Bayes posterior from tests/oracles/derive_values.py.
constexpr double kTwoCellPosterior0 = 0.7731558673245645;

FingerprintDatabase random_db(GridMap grid, std::uint32_t beams, std::uint64_t seed) {
  CodebookConfig cb;
  cb.num_tx_beams = beams;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.f, 30.f);
  std::vector<float> g(grid.num_cells() * beams);
  for (auto& x : g) x = u(rng);
  return FingerprintDatabase(grid, cb, std::move(g));
}

FingerprintDatabase table_db(GridMap grid, std::uint32_t beams, std::vector<float> gains) {
  CodebookConfig cb;
  cb.num_tx_beams = beams;
  return FingerprintDatabase(grid, cb, std::move(gains));
}

std::vector<double> random_pmf(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = u(rng));
  for (auto& x : p) x /= total;
  return p;
}

TEST(LocationPmf, ConstructionAndNormalisation) {
  GridMap grid{4, 3, 0.1};
  LocationPmf p(grid, std::vector<double>(12, 2.0));
  EXPECT_NEAR(p.total(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.at({2, 1}), 1.0 / 12.0);
  EXPECT_THROW(LocationPmf(grid).normalize(), std::domain_error);
  const auto pm = LocationPmf::point_mass(grid, {3, 2});
  EXPECT_EQ(pm.at({3, 2}), 1.0);
  EXPECT_EQ(pm.support_rows(), (std::pair<std::size_t, std::size_t>{3, 4}));
  EXPECT_NEAR(LocationPmf::uniform(grid).total(), 1.0, 1e-15);
}

TEST(RbePredict, PointMassShiftsByVelocity) {
  GridMap grid;
  const auto k = build_transition_kernel(MobilityModel::isotropic({3, 0}, 0.02, 0.0));
  const auto out = rbe_predict(LocationPmf::point_mass(grid, {10, 20}), k, {3, 0});
  EXPECT_EQ(out.at({13, 20}), 1.0);
  EXPECT_NEAR(out.total(), 1.0, 1e-15);
}

TEST(RbePredict, PointMassSpreadsIntoKernelPatch) {
  GridMap grid{7, 7, 0.1};
  const auto k = build_transition_kernel(MobilityModel::isotropic({0, 0}, 0.02, 0.3));
  ASSERT_EQ(k.radius, 1);
  const auto out = rbe_predict(LocationPmf::point_mass(grid, {3, 3}), k, {0, 0});
  for (std::size_t j = 0; j < k.offsets.size(); ++j) {
    EXPECT_NEAR(out.at({3 + k.offsets[j].d1, 3 + k.offsets[j].d2}), k.probabilities[j], 1e-15);
  }
  EXPECT_EQ(out.at({1, 3}), 0.0);
}

TEST(RbePredict, UniformStaysUniformForUnitRadiusKernel) {
  GridMap grid{6, 5, 0.1};
  const auto k = build_transition_kernel(MobilityModel::isotropic({0, 0}, 0.02, 0.3));
  const auto out = rbe_predict(LocationPmf::uniform(grid), k, {0, 0});
  for (double v : out.probabilities()) EXPECT_NEAR(v, 1.0 / 30.0, 1e-15);
}

TEST(RbePredict, MatchesBruteForceWithBoundaryFolding) {
  GridMap grid{7, 7, 0.1};
  for (double sigma : {0.0, 0.3, 1.0, 1.7}) {
    for (Offset v : {Offset{0, 0}, Offset{1, -1}, Offset{3, 0}, Offset{-2, 4}}) {
      const auto k = build_transition_kernel(MobilityModel::isotropic(v, 0.02, sigma));
      const auto p = random_pmf(grid.num_cells(), 17);
      const auto out = rbe_predict(LocationPmf(grid, p), k, v);
      const auto ref = oracle::predict(grid, p, k, v);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        EXPECT_NEAR(out.probabilities()[i], ref[i], 1e-14) << sigma << " " << i;
      }
    }
  }
}

TEST(RbePredict, CornerMassFoldsOntoCorner) {
  GridMap grid{5, 5, 0.1};
  const auto k = build_transition_kernel(MobilityModel::isotropic({0, 0}, 0.02, 1.0));
  const auto out = rbe_predict(LocationPmf::point_mass(grid, {4, 4}), k, {2, 2});
  double expected = 0.0;
  for (std::size_t j = 0; j < k.offsets.size(); ++j) {
    if (k.offsets[j].d1 >= -2 && k.offsets[j].d2 >= -2) expected += k.probabilities[j];
  }
  EXPECT_NEAR(out.at({4, 4}), expected, 1e-15);
  EXPECT_NEAR(out.total(), 1.0, 1e-14);
}

TEST(RbeTraining, PointMassPicksTopCellBeams) {
  GridMap grid{3, 2, 0.1};
  const auto db = random_db(grid, 8, 3);
  const auto belief = LocationPmf::point_mass(grid, {1, 1});
  const auto row = db.row(Cell{1, 1});
  const auto ref = oracle::top_beams(std::vector<double>(row.begin(), row.end()), 3);
  EXPECT_EQ(rbe_select_training(belief, db, 0.8, 3), ref);
}

TEST(RbeTraining, TwoCellExpectedGainExample) {
  // Beam 0 gains (10, 20), beam 1 gains (14, 15) over the two cells.
  const auto db = table_db(GridMap{2, 1, 0.1}, 2, {10.f, 14.f, 20.f, 15.f});
  const auto belief = LocationPmf::uniform(db.grid());
  const auto e = rbe_expected_gains(belief, db, 0.8);
  EXPECT_NEAR(e[0], 15.0 * 0.8, 1e-12);
  EXPECT_NEAR(e[1], 14.5 * 0.8, 1e-12);
  const auto t = rbe_select_training(belief, db, 0.8, 1);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].value, 0u);
}

TEST(RbeTraining, FullBudgetTrainsEveryBeam) {
  GridMap grid{3, 3, 0.1};
  const auto db = random_db(grid, 6, 8);
  const auto t = rbe_select_training(LocationPmf(grid, random_pmf(9, 2)), db, 0.8, 6);
  std::vector<bool> seen(6, false);
  for (auto b : t) seen[b.value] = true;
  EXPECT_EQ(std::count(seen.begin(), seen.end(), true), 6);
  EXPECT_THROW(rbe_select_training(LocationPmf::uniform(grid), db, 0.8, 7), std::invalid_argument);
}

TEST(RbeTraining, ExpectedGainsMatchBruteForce) {
  GridMap grid{5, 4, 0.1};
  const auto db = random_db(grid, 7, 9);
  const auto p = random_pmf(grid.num_cells(), 10);
  const auto e = rbe_expected_gains(LocationPmf(grid, p), db, 0.65);
  const auto ref = oracle::expected_gains(db, p, 0.65);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(e[i], ref[i], 1e-12);
}

TEST(RbeUpdate, TwoCellBayes) {
  const auto db = table_db(GridMap{2, 1, 0.1}, 1, {10.f, 0.f});
  const std::vector<TrainingResult> tr{{BeamIndex{0}, 10.0}};
  const auto out = rbe_update(LocationPmf::uniform(db.grid()), tr, db, BlockageModel{0.8, 6.0, 0.0, false});
  EXPECT_FALSE(out.underflow);
  EXPECT_NEAR(out.belief.at({0, 0}), kTwoCellPosterior0, 1e-12);
  EXPECT_NEAR(out.belief.at({1, 0}), 1.0 - kTwoCellPosterior0, 1e-12);
}

TEST(RbeUpdate, FlatLikelihoodKeepsPrior) {
  GridMap grid{4, 4, 0.1};
  const auto db = table_db(grid, 2, std::vector<float>(32, 12.5f));
  const auto p = random_pmf(16, 4);
  const std::vector<TrainingResult> tr{{BeamIndex{0}, 3.0}, {BeamIndex{1}, 20.0}};
  const auto out = rbe_update(LocationPmf(grid, p), tr, db, BlockageModel{});
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(out.belief.probabilities()[i], p[i], 1e-14);
}

TEST(RbeUpdate, SharpLikelihoodConcentrates) {
  GridMap grid{3, 3, 0.1};
  std::vector<float> g(9);
  for (std::size_t i = 0; i < 9; ++i) g[i] = static_cast<float>(3 * i);
  const auto db = table_db(grid, 1, g);
  const std::vector<TrainingResult> tr{{BeamIndex{0}, 12.0}};
  const auto out = rbe_update(LocationPmf::uniform(grid), tr, db, BlockageModel{1.0, 0.0, 0.0, false});
  EXPECT_FALSE(out.underflow);
  EXPECT_EQ(out.belief.at(grid.cell_at(4)), 1.0);
  EXPECT_NEAR(out.belief.total(), 1.0, 1e-15);
}

TEST(RbeUpdate, MatchesBruteForce) {
  GridMap grid{6, 5, 0.1};
  const auto db = random_db(grid, 5, 12);
  const auto p = random_pmf(grid.num_cells(), 13);
  const std::vector<TrainingResult> tr{{BeamIndex{1}, 14.0}, {BeamIndex{3}, 2.5}, {BeamIndex{4}, 27.0}};
  for (double alpha : {0.0, 0.3, 0.8, 1.0}) {
    const BlockageModel bm{alpha, 6.0, 0.0, false};
    const auto out = rbe_update(LocationPmf(grid, p), tr, db, bm);
    const auto ref = oracle::update(db, p, tr, alpha, 6.0, 0.0);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      EXPECT_NEAR(out.belief.probabilities()[i], ref[i], 1e-12) << alpha << " " << i;
    }
  }
}

TEST(RbeUpdate, RejectsEmptyTraining) {
  GridMap grid{2, 2, 0.1};
  const auto db = random_db(grid, 2, 1);
  EXPECT_THROW(rbe_update(LocationPmf::uniform(grid), {}, db, BlockageModel{}), std::invalid_argument);
}

TEST(RbeEstimate, LocationMeans) {
  GridMap grid{5, 5, 0.1};
  auto pm = rbe_estimate_location(LocationPmf::point_mass(grid, {3, 2}));
  EXPECT_EQ(pm[0], 3.0);
  EXPECT_EQ(pm[1], 2.0);
  std::vector<double> two(25, 0.0);
  two[grid.index({0, 0})] = 0.5;
  two[grid.index({2, 0})] = 0.5;
  pm = rbe_estimate_location(LocationPmf(grid, two));
  EXPECT_EQ(pm[0], 1.0);
  EXPECT_EQ(pm[1], 0.0);
  std::vector<double> four(25, 0.0);
  four[grid.index({0, 0})] = 0.1;
  four[grid.index({3, 1})] = 0.2;
  four[grid.index({1, 4})] = 0.3;
  four[grid.index({2, 2})] = 0.4;
  pm = rbe_estimate_location(LocationPmf(grid, four));
  EXPECT_NEAR(pm[0], 1.7, 1e-15);
  EXPECT_NEAR(pm[1], 2.2, 1e-15);
}

TEST(RbeEstimate, GainsEchoTrainedAndScaleUntrained) {
  const auto db = table_db(GridMap{1, 1, 0.1}, 3, {10.f, 4.f, 7.f});
  const auto belief = LocationPmf::point_mass(db.grid(), {0, 0});
  const std::vector<TrainingResult> tr{{BeamIndex{1}, 25.5}};
  const auto e = rbe_estimate_gains(belief, db, 0.8, tr);
  EXPECT_DOUBLE_EQ(e[0], 8.0);
  EXPECT_EQ(e[1], 25.5);
  EXPECT_EQ(rbe_choose_beam(e).value, 1u);
  const auto exact = rbe_estimate_gains(belief, db, 1.0, {});
  EXPECT_EQ(exact[2], 7.0);
}

TEST(RbeTracker, NoiselessStaticUserAlwaysOptimal) {
  GridMap grid{6, 4, 0.1};
  const auto db = random_db(grid, 8, 21);
  const auto k = build_transition_kernel(MobilityModel::isotropic({0, 0}, 0.02, 0.0));
  const BlockageModel bm{1.0, 0.0, 0.0, false};
  RbeTracker tracker(db, k, {0, 0}, bm, 2, LocationPmf::point_mass(grid, {2, 1}));
  Rng rng(1);
  for (int t = 0; t < 5; ++t) {
    const auto plan = tracker.plan_training();
    const auto ch = realize_channel(db, {2, 1}, bm, rng, t);
    std::vector<TrainingResult> tr;
    for (auto b : plan) tr.push_back({b, ch.gains_db[b.value]});
    EXPECT_EQ(tracker.select_beam(tr), argmax_beam(ch.gains_db));
  }
  EXPECT_EQ(tracker.frame(), 5);
  EXPECT_EQ(tracker.underflow_frames(), 0u);
}

}  // namespace
}  // namespace fptrack
