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

#include <algorithm>
#include <cmath>

#include "fptrack/kernels.hpp"

namespace fptrack::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void accumulate_weighted_rows_scalar(const double* weights, const float* table, std::size_t rows,
                                     std::size_t cols, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double w = weights[r];
    if (w == 0.0) continue;
    const float* row = table + r * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += w * static_cast<double>(row[j]);
  }
}

void gather_strided_scalar(const float* table, std::size_t stride, std::size_t n, double* out) {
  for (std::size_t r = 0; r < n; ++r) out[r] = static_cast<double>(table[r * stride]);
}

void add_log_mixture_scalar(const double* g, std::size_t n, const MixtureParams& p, double* acc) {
  const double db = p.measured_db - p.blocked_db;
  const double b = p.log_one_minus_alpha - db * db * p.inv_two_var;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = p.measured_db - g[i];
    const double a = p.log_alpha - d * d * p.inv_two_var;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    // log(e^a + e^b) = hi + log1p(e^(lo - hi)); lo = -inf leaves hi
    acc[i] += hi + std::log1p(std::exp(lo - hi));
  }
}

void scale_by_exp_scalar(const double* logw, double shift, double* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) p[i] *= std::exp(logw[i] - shift);
}

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

void scale_scalar(double s, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

constexpr KernelTable kScalar{
    Isa::Scalar,
    axpy_scalar,
    accumulate_weighted_rows_scalar,
    gather_strided_scalar,
    add_log_mixture_scalar,
    scale_by_exp_scalar,
    sum_scalar,
    scale_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace fptrack::kernels
