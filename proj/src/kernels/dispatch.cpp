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

#include <atomic>
#include <stdexcept>
#include <string>

#include "fptrack/kernels.hpp"

namespace fptrack::kernels {

#if defined(FPTRACK_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(FPTRACK_HAVE_AVX2)
  return &avx2_table_impl();
#else
  return nullptr;
#endif
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  throw std::invalid_argument("unknown kernel ISA '" + std::string(name) + "'");
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(FPTRACK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() { return cpu_supports(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar; }

namespace {

const KernelTable* table_for(Isa isa) {
  return isa == Isa::Avx2 ? avx2_table() : &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{table_for(detect_isa())};
  return slot;
}

}  // namespace

void select_isa(Isa isa) {
  if (!cpu_supports(isa)) {
    throw std::invalid_argument("kernel ISA '" + std::string(isa_name(isa)) +
                                "' is not supported on this host");
  }
  active_slot().store(table_for(isa));
}

Isa active_isa() { return active().isa; }

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  active().axpy(a, x.data(), y.data(), x.size());
}

void accumulate_weighted_rows(std::span<const double> weights, std::span<const float> table,
                              std::size_t cols, std::span<double> out) {
  if (out.size() != cols || table.size() < weights.size() * cols) {
    throw std::invalid_argument("accumulate_weighted_rows: shape mismatch");
  }
  active().accumulate_weighted_rows(weights.data(), table.data(), weights.size(), cols, out.data());
}

void gather_strided(std::span<const float> table, std::size_t offset, std::size_t stride,
                    std::span<double> out) {
  if (!out.empty() && offset + (out.size() - 1) * stride >= table.size()) {
    throw std::invalid_argument("gather_strided: out of range");
  }
  active().gather_strided(table.data() + offset, stride, out.size(), out.data());
}

void add_log_mixture(std::span<const double> g, const MixtureParams& params, std::span<double> acc) {
  if (g.size() != acc.size()) throw std::invalid_argument("add_log_mixture: length mismatch");
  active().add_log_mixture(g.data(), g.size(), params, acc.data());
}

void scale_by_exp(std::span<const double> logw, double shift, std::span<double> p) {
  if (logw.size() != p.size()) throw std::invalid_argument("scale_by_exp: length mismatch");
  active().scale_by_exp(logw.data(), shift, p.data(), p.size());
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

void scale(double s, std::span<double> x) { active().scale(s, x.data(), x.size()); }

}  // namespace fptrack::kernels
