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

#include "boxfill/kernels.hpp"

#include <cstddef>
#include <stdexcept>

#if defined(BOXFILL_HAVE_AVX2) && defined(__AVX2__)
#include <immintrin.h>
#endif

namespace boxfill::kernels {

#if defined(BOXFILL_HAVE_AVX2) && defined(__AVX2__)

double lagrangian_sum_avx2(std::span<const double> width,
                           std::span<const double> log_ratio,
                           std::span<const double> phi_hi,
                           std::span<const double> phi_lo,
                           double kappa) {
    const std::size_t n = width.size();
    const std::size_t body = n - n % 4;
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d vk = _mm256_set1_pd(kappa);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += 4) {
        const __m256d h = _mm256_loadu_pd(width.data() + i);
        const __m256d lr = _mm256_loadu_pd(log_ratio.data() + i);
        const __m256d ph = _mm256_loadu_pd(phi_hi.data() + i);
        const __m256d pl = _mm256_loadu_pd(phi_lo.data() + i);
        const __m256d dphi = _mm256_sub_pd(ph, pl);
        const __m256d phim = _mm256_mul_pd(half, _mm256_add_pd(ph, pl));
        __m256d num = _mm256_sub_pd(_mm256_add_pd(h, dphi), _mm256_mul_pd(vk, lr));
        num = _mm256_max_pd(num, zero);
        acc = _mm256_add_pd(acc, _mm256_div_pd(num, phim));
    }
    alignas(32) double s[4];
    _mm256_store_pd(s, acc);
    double total = (s[0] + s[1]) + (s[2] + s[3]);
    for (std::size_t i = body; i < n; ++i) {
        const double dphi = phi_hi[i] - phi_lo[i];
        const double phim = 0.5 * (phi_hi[i] + phi_lo[i]);
        double num = (width[i] + dphi) - kappa * log_ratio[i];
        num = num > 0.0 ? num : 0.0;
        total += num / phim;
    }
    return total;
}

#else

double lagrangian_sum_avx2(std::span<const double>,
                           std::span<const double>,
                           std::span<const double>,
                           std::span<const double>,
                           double) {
    throw std::logic_error("AVX2 kernel not compiled for this target");
}

#endif

} // namespace boxfill::kernels
