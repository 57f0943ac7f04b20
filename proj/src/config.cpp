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

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "fptrack/error.hpp"
#include "fptrack/harness.hpp"

namespace fptrack {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError("config key '" + std::string(key) + "': value '" + std::string(value) + "' " +
                    std::string(why));
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value, "is not a finite number");
  }
  return out;
}

template <typename Int>
Int to_integer(std::string_view key, std::string_view value) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value, "is not a valid integer");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "is not a boolean");
}

using Setter = void (*)(SimConfig&, std::string_view, std::string_view);

struct KeyEntry {
  ConfigKey key;
  Setter set;
};

constexpr std::array kKeys{
    KeyEntry{{"length_cells", "grid cells along the street"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.grid.length_cells = to_integer<std::uint32_t>(k, v); }},
    KeyEntry{{"width_cells", "grid cells across the street"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.grid.width_cells = to_integer<std::uint32_t>(k, v); }},
    KeyEntry{{"resolution_m", "cell edge length in metres"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.grid.resolution_m = to_double(k, v); }},
    KeyEntry{{"num_tx_beams", "transmit beams (= array elements)"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.codebook.num_tx_beams = to_integer<std::uint32_t>(k, v); }},
    KeyEntry{{"num_rx_beams", "receive beams"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.codebook.num_rx_beams = to_integer<std::uint32_t>(k, v); }},
    KeyEntry{{"carrier_frequency_hz", "carrier frequency"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.codebook.carrier_frequency_hz = to_double(k, v); }},
    KeyEntry{{"element_spacing", "array element spacing in wavelengths"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.codebook.element_spacing = to_double(k, v); }},
    KeyEntry{{"frame_interval_s", "frame duration"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.frame_interval_s = to_double(k, v); }},
    KeyEntry{{"velocity_mps", "user speed along the street"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.velocity_mps = to_double(k, v); }},
    KeyEntry{{"sigma_w", "location error scale in cells"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.sigma_w = to_double(k, v); }},
    KeyEntry{{"sigma_v_db", "small-scale fading std in dB"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.sigma_v_db = to_double(k, v); }},
    KeyEntry{{"alpha", "probability a beam is not dynamically blocked"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.alpha = to_double(k, v); }},
    KeyEntry{{"blocked_gain_db", "gain of a blocked beam in dB"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.blocked_gain_db = to_double(k, v); }},
    KeyEntry{{"shared_fading", "one fading draw per frame for all beams"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.shared_fading = to_bool(k, v); }},
    KeyEntry{{"budget", "beams trained per frame"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.budget = to_integer<std::size_t>(k, v); }},
    KeyEntry{{"frames", "frames per run"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.frames = to_integer<std::size_t>(k, v); }},
    KeyEntry{{"runs", "Monte Carlo runs"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.runs = to_integer<std::size_t>(k, v); }},
    KeyEntry{{"initial_x1", "initial cell along the street"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.initial_cell.x1 = to_integer<int>(k, v); }},
    KeyEntry{{"initial_x2", "initial cell across the street"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.initial_cell.x2 = to_integer<int>(k, v); }},
    KeyEntry{{"scheme", "rbe | ekf | exhaustive | sweep_around"},
             [](SimConfig& c, std::string_view, std::string_view v) { c.scheme = parse_scheme(v); }},
    KeyEntry{{"seed_base", "seed of run 0; run r uses seed_base + r"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.seed_base = to_integer<std::uint64_t>(k, v); }},
    KeyEntry{{"fingerprint", "fingerprint file; empty for the synthetic street"},
             [](SimConfig& c, std::string_view, std::string_view v) { c.fingerprint_path = std::string(v); }},
    KeyEntry{{"exhaustive_mode", "full | rotation"},
             [](SimConfig& c, std::string_view k, std::string_view v) {
               if (v == "full") {
                 c.exhaustive_mode = ExhaustiveMode::FullSweep;
               } else if (v == "rotation") {
                 c.exhaustive_mode = ExhaustiveMode::Rotation;
               } else {
                 bad_value(k, v, "is not 'full' or 'rotation'");
               }
             }},
    KeyEntry{{"rbe_initial", "point | uniform"},
             [](SimConfig& c, std::string_view k, std::string_view v) {
               if (v == "point") {
                 c.rbe_initial = InitialBelief::PointMass;
               } else if (v == "uniform") {
                 c.rbe_initial = InitialBelief::Uniform;
               } else {
                 bad_value(k, v, "is not 'point' or 'uniform'");
               }
             }},
    KeyEntry{{"ekf_initial_variance", "initial EKF covariance scale (cells^2)"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.ekf_initial_variance = to_double(k, v); }},
    KeyEntry{{"workers", "Monte Carlo worker threads"},
             [](SimConfig& c, std::string_view k, std::string_view v) { c.workers = to_integer<unsigned>(k, v); }},
};

constexpr auto make_key_list() {
  std::array<ConfigKey, kKeys.size()> out{};
  for (std::size_t i = 0; i < kKeys.size(); ++i) out[i] = kKeys[i].key;
  return out;
}
constexpr auto kKeyList = make_key_list();

}  // namespace

std::span<const ConfigKey> config_keys() { return kKeyList; }

void apply_setting(SimConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto& entry : kKeys) {
    if (entry.key.name == key) {
      entry.set(config, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

SimConfig parse_config_text(std::string_view text, SimConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

SimConfig load_config_file(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace fptrack
