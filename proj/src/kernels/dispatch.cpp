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

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "boxfill/kernels.hpp"

namespace boxfill::kernels {

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(BOXFILL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa isa = [] {
        const char* env = std::getenv("BOXFILL_KERNEL");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
        return avx2_available() ? Isa::avx2 : Isa::scalar;
    }();
    return isa;
}

double lagrangian_sum(std::span<const double> width,
                      std::span<const double> log_ratio,
                      std::span<const double> phi_hi,
                      std::span<const double> phi_lo,
                      double kappa) {
    const std::size_t n = width.size();
    if (log_ratio.size() != n || phi_hi.size() != n || phi_lo.size() != n) {
        throw std::invalid_argument("lagrangian_sum: array lengths differ");
    }
    if (active_isa() == Isa::avx2) return lagrangian_sum_avx2(width, log_ratio, phi_hi, phi_lo, kappa);
    return lagrangian_sum_scalar(width, log_ratio, phi_hi, phi_lo, kappa);
}

} // namespace boxfill::kernels
