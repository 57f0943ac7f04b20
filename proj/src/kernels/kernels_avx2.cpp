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

// AVX2 + FMA variants. This file is the only one compiled with -mavx2 -mfma;
// nothing here may be called unless cpu_supports(Isa::Avx2) holds.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fptrack/kernels.hpp"

namespace fptrack::kernels {
namespace {

// exp(x) for x <= 0, including -inf. Inputs below the normal range flush to 0.
// Range reduction x = n*ln2 + r with |r| <= ln2/2, then a degree-13 Taylor
// polynomial; truncation error < 5e-18 relative.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d lower = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lower, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lower);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  // Horner on 1/k! coefficients, highest first.
  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
      1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
      1.0 / 6.0,          0.5,               1.0,              1.0};
  __m256d poly = _mm256_set1_pd(kInvFact[0]);
  for (std::size_t k = 1; k < std::size(kInvFact); ++k) {
    poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(kInvFact[k]));
  }

  // 2^n by writing (n + 1023) into the exponent field; n is in [-1022, 0].
  const __m256d magic = _mm256_set1_pd(4503599627370496.0 + 1023.0);  // 2^52 + bias
  const __m256i biased = _mm256_castpd_si256(_mm256_add_pd(n, magic));
  const __m256d two_n = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
  return _mm256_andnot_pd(underflow, _mm256_mul_pd(poly, two_n));
}

// log(w) for w in [1, 2]. Reduces to [sqrt(1/2), sqrt(2)] and sums the
// atanh series 2*(s + s^3/3 + ...) with s = (w - 1)/(w + 1), |s| < 0.1716.
inline __m256d log_one_to_two(__m256d w) {
  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730950488);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d big = _mm256_cmp_pd(w, sqrt2, _CMP_GT_OQ);
  w = _mm256_blendv_pd(w, _mm256_mul_pd(w, _mm256_set1_pd(0.5)), big);
  const __m256d e = _mm256_and_pd(big, _mm256_set1_pd(0.69314718055994530942));

  const __m256d s = _mm256_div_pd(_mm256_sub_pd(w, one), _mm256_add_pd(w, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  for (int k = 21; k >= 1; k -= 2) {
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / k));
  }
  return _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s), poly, e);
}

// log1p(u) for u in [0, 1], via log(1 + u) * u / ((1 + u) - 1) to keep
// relative accuracy for small u.
inline __m256d log1p_unit(__m256d u) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d w = _mm256_add_pd(one, u);
  const __m256d wm1 = _mm256_sub_pd(w, one);
  const __m256d exact = _mm256_cmp_pd(wm1, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d corrected = _mm256_div_pd(_mm256_mul_pd(log_one_to_two(w), u),
                                          _mm256_blendv_pd(wm1, one, exact));
  return _mm256_blendv_pd(corrected, u, exact);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void accumulate_weighted_rows_avx2(const double* weights, const float* table, std::size_t rows,
                                   std::size_t cols, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double w = weights[r];
    if (w == 0.0) continue;
    const __m256d wv = _mm256_set1_pd(w);
    const float* row = table + r * cols;
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      const __m256d g = _mm256_cvtps_pd(_mm_loadu_ps(row + j));
      _mm256_storeu_pd(out + j, _mm256_fmadd_pd(wv, g, _mm256_loadu_pd(out + j)));
    }
    for (; j < cols; ++j) out[j] = std::fma(w, static_cast<double>(row[j]), out[j]);
  }
}

void gather_strided_avx2(const float* table, std::size_t stride, std::size_t n, double* out) {
  std::size_t r = 0;
  if (stride <= static_cast<std::size_t>(INT32_MAX / 4)) {
    const int s = static_cast<int>(stride);
    const __m128i idx = _mm_setr_epi32(0, s, 2 * s, 3 * s);
    for (; r + 4 <= n && (r + 3) * stride <= static_cast<std::size_t>(INT32_MAX); r += 4) {
      const __m128 v = _mm_i32gather_ps(table + r * stride, idx, 4);
      _mm256_storeu_pd(out + r, _mm256_cvtps_pd(v));
    }
  }
  for (; r < n; ++r) out[r] = static_cast<double>(table[r * stride]);
}

void add_log_mixture_avx2(const double* g, std::size_t n, const MixtureParams& p, double* acc) {
  const double db = p.measured_db - p.blocked_db;
  const double b_scalar = p.log_one_minus_alpha - db * db * p.inv_two_var;
  const __m256d b = _mm256_set1_pd(b_scalar);
  const __m256d gamma = _mm256_set1_pd(p.measured_db);
  const __m256d k = _mm256_set1_pd(p.inv_two_var);
  const __m256d log_alpha = _mm256_set1_pd(p.log_alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(gamma, _mm256_loadu_pd(g + i));
    const __m256d a = _mm256_sub_pd(log_alpha, _mm256_mul_pd(_mm256_mul_pd(d, d), k));
    const __m256d hi = _mm256_max_pd(a, b);
    const __m256d lo = _mm256_min_pd(a, b);
    const __m256d term = _mm256_add_pd(hi, log1p_unit(exp_nonpositive(_mm256_sub_pd(lo, hi))));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), term));
  }
  for (; i < n; ++i) {
    const double d = p.measured_db - g[i];
    const double a = p.log_alpha - d * d * p.inv_two_var;
    const double hi = std::max(a, b_scalar);
    const double lo = std::min(a, b_scalar);
    acc[i] += hi + std::log1p(std::exp(lo - hi));
  }
}

void scale_by_exp_avx2(const double* logw, double shift, double* p, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = exp_nonpositive(_mm256_sub_pd(_mm256_loadu_pd(logw + i), sv));
    _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), e));
  }
  for (; i < n; ++i) p[i] *= std::exp(logw[i] - shift);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += x[i];
  return s;
}

void scale_avx2(double s, double* x, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(sv, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= s;
}

constexpr KernelTable kAvx2{
    Isa::Avx2,
    axpy_avx2,
    accumulate_weighted_rows_avx2,
    gather_strided_avx2,
    add_log_mixture_avx2,
    scale_by_exp_avx2,
    sum_avx2,
    scale_avx2,
};

}  // namespace

const KernelTable& avx2_table_impl() { return kAvx2; }

}  // namespace fptrack::kernels
