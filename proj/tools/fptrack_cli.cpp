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

// fptrack command line: generate-fingerprint | run | sweep.
//
// Every simulation parameter is a flag named after its config-file key
// (--sigma_v_db 4); --config reads a key = value file first and flags
// override it. Exit codes: 0 success, 2 configuration error, 3 fingerprint
// I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fptrack/error.hpp"
#include "fptrack/fingerprint.hpp"
#include "fptrack/harness.hpp"
#include "fptrack/kernels.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFingerprintIo = 3;

struct CommonOptions {
  std::string config_file;
  std::string isa = "auto";
  std::map<std::string, std::string> settings;
  std::map<std::string, CLI::Option*> options;
};

void add_sim_flags(CLI::App& cmd, CommonOptions& common) {
  cmd.add_option("--config", common.config_file, "key = value configuration file");
  cmd.add_option("--isa", common.isa, "kernel variant: auto | scalar | avx2");
  for (const auto& key : fptrack::config_keys()) {
    const std::string name(key.name);
    common.options[name] = cmd.add_option("--" + name, common.settings[name], std::string(key.help));
  }
}

fptrack::SimConfig resolve_config(const CommonOptions& common) {
  fptrack::SimConfig config;
  if (!common.config_file.empty()) config = fptrack::load_config_file(common.config_file);
  for (const auto& [name, option] : common.options) {
    if (option->count() > 0) fptrack::apply_setting(config, name, common.settings.at(name));
  }
  if (common.isa != "auto") {
    try {
      fptrack::kernels::select_isa(fptrack::kernels::parse_isa(common.isa));
    } catch (const std::invalid_argument& e) {
      throw fptrack::ConfigError(e.what());
    }
  }
  config.validate();
  return config;
}

std::vector<fptrack::Scheme> parse_schemes(const std::string& list, fptrack::Scheme fallback) {
  if (list.empty()) return {fallback};
  if (list == "all") return {fptrack::kAllSchemes.begin(), fptrack::kAllSchemes.end()};
  std::vector<fptrack::Scheme> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(fptrack::parse_scheme(item));
  return out;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw fptrack::ConfigError("sweep value '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw fptrack::ConfigError("--values must list at least one value");
  return out;
}

void emit_csv(const std::vector<fptrack::SweepRow>& rows, const std::string& path) {
  if (path.empty() || path == "-") {
    fptrack::write_csv(std::cout, rows);
    return;
  }
  std::ofstream out(path);
  if (!out) throw fptrack::ConfigError("cannot open '" + path + "' for writing");
  fptrack::write_csv(out, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fingerprint-aided mmWave beam tracking simulator"};
  app.require_subcommand(1);

  CommonOptions gen_opts;
  std::string out_path;
  auto* gen = app.add_subcommand("generate-fingerprint", "Synthesise the street fingerprint database");
  add_sim_flags(*gen, gen_opts);
  gen->add_option("--out", out_path, "output fingerprint file")->required();

  CommonOptions run_opts;
  std::string run_schemes;
  std::string run_csv;
  auto* run = app.add_subcommand("run", "Monte Carlo run of one or more schemes");
  add_sim_flags(*run, run_opts);
  run->add_option("--schemes", run_schemes, "comma list or 'all'; default: --scheme");
  run->add_option("--csv", run_csv, "CSV output path (default stdout)");

  CommonOptions sweep_opts;
  std::string axis;
  std::string values;
  std::string sweep_schemes;
  std::string sweep_csv;
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and tabulate the metrics");
  add_sim_flags(*sweep, sweep_opts);
  sweep->add_option("--axis", axis, "sigma_v | budget | velocity")->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--schemes", sweep_schemes, "comma list or 'all'; default: --scheme");
  sweep->add_option("--csv", sweep_csv, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen) {
      const auto config = resolve_config(gen_opts);
      fptrack::save(fptrack::make_fingerprint(config), out_path);
      return EXIT_SUCCESS;
    }
    if (*run) {
      const auto config = resolve_config(run_opts);
      const auto db = fptrack::make_fingerprint(config);
      std::vector<fptrack::SweepRow> rows;
      for (auto scheme : parse_schemes(run_schemes, config.scheme)) {
        rows.push_back({scheme, fptrack::SweepAxis::None, 0.0, fptrack::monte_carlo(config, db, scheme),
                        config.seed_base});
      }
      emit_csv(rows, run_csv);
      return EXIT_SUCCESS;
    }
    if (*sweep) {
      const auto config = resolve_config(sweep_opts);
      const auto db = fptrack::make_fingerprint(config);
      const auto schemes = parse_schemes(sweep_schemes, config.scheme);
      const auto axis_values = parse_values(values);
      emit_csv(fptrack::sweep_experiment(config, db, fptrack::parse_axis(axis), axis_values, schemes),
               sweep_csv);
      return EXIT_SUCCESS;
    }
  } catch (const fptrack::FingerprintIoError& e) {
    std::cerr << "fingerprint error: " << e.what() << '\n';
    return kExitFingerprintIo;
  } catch (const fptrack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
