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
#include <span>
#include <string_view>

// Data-parallel inner loops of the trackers. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2+FMA variant. The active
// variant is chosen once per process (auto-detected, or forced through
// select_isa) and every caller goes through the dispatch table, so results
// within one process never mix instruction sets.

namespace fptrack::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
Isa parse_isa(std::string_view name);  // "scalar" | "avx2"; throws std::invalid_argument

/// Blockage-mixture log-likelihood parameters for one trained beam.
///
/// The per-cell term added by add_log_mixture is
///   log( alpha * exp(-(gamma - g)^2 * inv_two_var) + (1 - alpha) * exp(-(gamma - blocked)^2 * inv_two_var) )
/// with both logs of the mixture weights precomputed (either may be -inf).
struct MixtureParams {
  double measured_db = 0.0;
  double blocked_db = 0.0;
  double inv_two_var = 0.0;
  double log_alpha = 0.0;
  double log_one_minus_alpha = 0.0;
};

struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[j] += sum_r weights[r] * table[r * cols + j]; rows with weight 0 are skipped
  void (*accumulate_weighted_rows)(const double* weights, const float* table, std::size_t rows,
                                   std::size_t cols, double* out);
  // out[r] = table[r * stride]
  void (*gather_strided)(const float* table, std::size_t stride, std::size_t n, double* out);
  // acc[i] += log-mixture term of g[i]
  void (*add_log_mixture)(const double* g, std::size_t n, const MixtureParams& params, double* acc);
  // p[i] *= exp(logw[i] - shift); logw[i] - shift must be <= 0 or -inf
  void (*scale_by_exp)(const double* logw, double shift, double* p, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  void (*scale)(double s, double* x, std::size_t n);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);
/// Best variant for this host.
Isa detect_isa();
/// Forces a variant process-wide. Throws std::invalid_argument if unsupported.
void select_isa(Isa isa);
Isa active_isa();
const KernelTable& active();

// Span conveniences over the active table.
void axpy(double a, std::span<const double> x, std::span<double> y);
void accumulate_weighted_rows(std::span<const double> weights, std::span<const float> table,
                              std::size_t cols, std::span<double> out);
void gather_strided(std::span<const float> table, std::size_t offset, std::size_t stride,
                    std::span<double> out);
void add_log_mixture(std::span<const double> g, const MixtureParams& params, std::span<double> acc);
void scale_by_exp(std::span<const double> logw, double shift, std::span<double> p);
double sum(std::span<const double> x);
void scale(double s, std::span<double> x);

}  // namespace fptrack::kernels
