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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "fptrack/error.hpp"
#include "fptrack/harness.hpp"

namespace fptrack {
namespace {

namespace fs = std::filesystem;

TEST(ConfigText, ParsesKeysCommentsAndBlankLines) {
  const auto c = parse_config_text(
      "# street experiment\n"
      "sigma_v_db = 4.5\n"
      "\n"
      "  budget=7   # per frame\n"
      "scheme = sweep_around\n"
      "shared_fading = true\n"
      "exhaustive_mode = rotation\n"
      "ekf_initial_variance = 2\n");
  EXPECT_EQ(c.sigma_v_db, 4.5);
  EXPECT_EQ(c.budget, 7u);
  EXPECT_EQ(c.scheme, Scheme::SweepAround);
  EXPECT_TRUE(c.shared_fading);
  EXPECT_EQ(c.exhaustive_mode, ExhaustiveMode::Rotation);
  ASSERT_TRUE(c.ekf_initial_variance.has_value());
  EXPECT_EQ(*c.ekf_initial_variance, 2.0);
  EXPECT_EQ(c.alpha, SimConfig{}.alpha);
}

TEST(ConfigText, LaterLinesAndBaseCompose) {
  SimConfig base;
  base.runs = 17;
  const auto c = parse_config_text("alpha = 0.5\nalpha = 0.6\n", base);
  EXPECT_EQ(c.alpha, 0.6);
  EXPECT_EQ(c.runs, 17u);
}

TEST(ConfigText, RejectsMalformedInput) {
  EXPECT_THROW(parse_config_text("alpha 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config_text("no_such_key = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("alpha = high\n"), ConfigError);
  EXPECT_THROW(parse_config_text("budget = 2.5\n"), ConfigError);
  EXPECT_THROW(parse_config_text("runs = -3\n"), ConfigError);
  EXPECT_THROW(parse_config_text("sigma_w = nan\n"), ConfigError);
  EXPECT_THROW(parse_config_text("shared_fading = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config_text("scheme = oracle\n"), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/fptrack.cfg"), ConfigError);
}

TEST(ConfigKeys, EveryKeyAcceptsAValidValue) {
  const std::map<std::string, std::string> samples{
      {"length_cells", "120"},     {"width_cells", "30"},        {"resolution_m", "0.2"},
      {"num_tx_beams", "32"},      {"num_rx_beams", "2"},        {"carrier_frequency_hz", "6e10"},
      {"element_spacing", "0.5"},  {"frame_interval_s", "0.01"}, {"velocity_mps", "20"},
      {"sigma_w", "1.5"},          {"sigma_v_db", "3"},          {"alpha", "0.9"},
      {"blocked_gain_db", "-3"},   {"shared_fading", "1"},       {"budget", "3"},
      {"frames", "50"},            {"runs", "10"},               {"initial_x1", "2"},
      {"initial_x2", "4"},         {"scheme", "ekf"},            {"seed_base", "99"},
      {"fingerprint", "street.fpd"}, {"exhaustive_mode", "full"}, {"rbe_initial", "uniform"},
      {"ekf_initial_variance", "0.5"}, {"workers", "2"}};
  std::size_t seen = 0;
  for (const auto& key : config_keys()) {
    const auto it = samples.find(std::string(key.name));
    ASSERT_NE(it, samples.end()) << "no sample for key " << key.name;
    SimConfig c;
    EXPECT_NO_THROW(apply_setting(c, key.name, it->second)) << key.name;
    EXPECT_FALSE(key.help.empty());
    ++seen;
  }
  EXPECT_EQ(seen, samples.size());
}

// Runs the CLI binary and returns its exit status.
int run_cli(const std::string& args) {
  const std::string cmd = std::string(FPTRACK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("fptrack_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Small street so each invocation finishes quickly.
  static constexpr const char* kSmall = "--length_cells 120 --frames 10 --runs 2";
  fs::path dir_;
};

TEST_F(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli("run --no_such_flag 1"), 2);
  EXPECT_EQ(run_cli(std::string("run ") + kSmall + " --alpha 1.5"), 2);
  EXPECT_EQ(run_cli(std::string("run ") + kSmall + " --sigma_w abc"), 2);
  EXPECT_EQ(run_cli(std::string("run ") + kSmall + " --velocity_mps 16"), 2);
  EXPECT_EQ(run_cli(std::string("sweep ") + kSmall + " --axis alpha --values 1"), 2);
  EXPECT_EQ(run_cli(std::string("sweep ") + kSmall + " --axis budget --values 2,x"), 2);
  EXPECT_EQ(run_cli("run --config " + (dir_ / "missing.cfg").string()), 2);
  EXPECT_EQ(run_cli(""), 2);
}

TEST_F(Cli, FingerprintErrorsExitThree) {
  EXPECT_EQ(run_cli(std::string("run ") + kSmall + " --fingerprint " + (dir_ / "absent.fpd").string()), 3);
  const auto junk = dir_ / "junk.fpd";
  std::ofstream(junk) << "not a fingerprint";
  EXPECT_EQ(run_cli(std::string("run ") + kSmall + " --fingerprint " + junk.string()), 3);
}

TEST_F(Cli, GenerateThenRunFromFile) {
  const auto fpd = dir_ / "street.fpd";
  const auto csv_synth = dir_ / "synth.csv";
  const auto csv_file = dir_ / "file.csv";
  ASSERT_EQ(run_cli(std::string("generate-fingerprint --length_cells 120 --out ") + fpd.string()), 0);
  EXPECT_EQ(fs::file_size(fpd), 24u + 120u * 40u * 64u * 4u);
  ASSERT_EQ(run_cli(std::string("run ") + kSmall + " --schemes all --csv " + csv_synth.string()), 0);
  ASSERT_EQ(run_cli(std::string("run ") + kSmall + " --schemes all --fingerprint " + fpd.string() +
                    " --csv " + csv_file.string()),
            0);
  const std::string text = slurp(csv_synth);
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_NE(text.find("\nrbe,none,0,"), std::string::npos);
  // Gains are stored as f32, so the file-backed run may differ in the last
  // digits; the layout must not.
  const std::string from_file = slurp(csv_file);
  EXPECT_EQ(std::count(from_file.begin(), from_file.end(), '\n'), 5);
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  const auto cfg = dir_ / "exp.cfg";
  std::ofstream(cfg) << "length_cells = 120\nframes = 10\nruns = 3\nseed_base = 11\nscheme = ekf\n";
  const auto from_file = dir_ / "a.csv";
  const auto overridden = dir_ / "b.csv";
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --csv " + from_file.string()), 0);
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --runs 2 --seed_base 5 --csv " + overridden.string()), 0);
  const std::string a = slurp(from_file);
  const std::string b = slurp(overridden);
  EXPECT_NE(a.find("\nekf,none,0,"), std::string::npos);
  EXPECT_NE(a.find(",3,10,11\n"), std::string::npos);
  EXPECT_NE(b.find("\nekf,none,0,"), std::string::npos);
  EXPECT_NE(b.find(",2,10,5\n"), std::string::npos);
}

TEST_F(Cli, SweepWritesOneRowPerValueAndScheme) {
  const auto csv = dir_ / "sweep.csv";
  ASSERT_EQ(run_cli(std::string("sweep ") + kSmall + " --axis velocity --values 5,10,15 --schemes rbe,ekf --csv " +
                    csv.string()),
            0);
  const std::string text = slurp(csv);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
  EXPECT_NE(text.find("\nekf,velocity,15,"), std::string::npos);
}

}  // namespace
}  // namespace fptrack
