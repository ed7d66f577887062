// Copyright 2026 The boxfill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>

namespace boxfill::kernels {

// Phase-space Lagrangian reduction over n cells [x_lo, x_hi]:
//
//   sum_i max(0, (h + dphi) - kappa * log_ratio) / phim
//
// with h = x_hi - x_lo, log_ratio = ln(x_hi / x_lo), dphi = phi_hi - phi_lo
// and phim the midpoint value of phi. The numerator is the exact cell
// integral of 1 + phi' - kappa/x, so it vanishes on any orbit of b = beta;
// only 1/phi is sampled at the midpoint.
//
// Every variant accumulates in four interleaved stripes (cell i goes to
// stripe i % 4), folds them as (s0 + s1) + (s2 + s3), then adds the
// remainder cells in order. With FMA contraction disabled all variants
// return identical bits.

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

double lagrangian_sum_scalar(std::span<const double> width,
                             std::span<const double> log_ratio,
                             std::span<const double> phi_hi,
                             std::span<const double> phi_lo,
                             double kappa);

/// Only callable when avx2_available() is true.
double lagrangian_sum_avx2(std::span<const double> width,
                           std::span<const double> log_ratio,
                           std::span<const double> phi_hi,
                           std::span<const double> phi_lo,
                           double kappa);

bool avx2_available();

/// Variant used by lagrangian_sum: AVX2 when the CPU has it, unless the
/// BOXFILL_KERNEL environment variable says "scalar".
Isa active_isa();

double lagrangian_sum(std::span<const double> width,
                      std::span<const double> log_ratio,
                      std::span<const double> phi_hi,
                      std::span<const double> phi_lo,
                      double kappa);

} // namespace boxfill::kernels
