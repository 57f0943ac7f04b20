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

#include <stdexcept>
#include <string>

namespace fptrack {

/// Invalid simulation or scene configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fingerprint file could not be read or written (CLI exit code 3).
class FingerprintIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionMismatchError : public FingerprintIoError {
 public:
  using FingerprintIoError::FingerprintIoError;
};

class DimensionMismatchError : public FingerprintIoError {
 public:
  using FingerprintIoError::FingerprintIoError;
};

class TruncatedFileError : public FingerprintIoError {
 public:
  using FingerprintIoError::FingerprintIoError;
};

}  // namespace fptrack
