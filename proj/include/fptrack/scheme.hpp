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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fptrack/codebook.hpp"

namespace fptrack {

/// Measured gain of one trained beam in the current frame (dB).
struct TrainingResult {
  BeamIndex beam;
  double gain_db = 0.0;
};

/// One beam-tracking scheme driven frame by frame by the harness.
///
/// Per frame the harness calls plan_training() once, measures the returned
/// beams on the realised channel, and passes the results to select_beam().
class TrackingScheme {
 public:
  virtual ~TrackingScheme() = default;

  virtual std::string_view name() const = 0;
  virtual std::vector<BeamIndex> plan_training() = 0;
  virtual BeamIndex select_beam(std::span<const TrainingResult> results) = 0;

  /// Posterior location estimate in cells, for schemes that track location.
  virtual std::optional<std::array<double, 2>> location_estimate() const { return std::nullopt; }
};

}  // namespace fptrack
