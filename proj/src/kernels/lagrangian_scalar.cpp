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

namespace boxfill::kernels {

namespace {

inline double cell_term(double h, double lr, double ph, double pl, double kappa) {
    const double dphi = ph - pl;
    const double phim = 0.5 * (ph + pl);
    double num = (h + dphi) - kappa * lr;
    num = num > 0.0 ? num : 0.0; // same selection rule as _mm256_max_pd(num, 0)
    return num / phim;
}

} // namespace

double lagrangian_sum_scalar(std::span<const double> width,
                             std::span<const double> log_ratio,
                             std::span<const double> phi_hi,
                             std::span<const double> phi_lo,
                             double kappa) {
    const std::size_t n = width.size();
    const std::size_t body = n - n % 4;
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < body; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) {
            s[j] += cell_term(width[i + j], log_ratio[i + j], phi_hi[i + j], phi_lo[i + j], kappa);
        }
    }
    double total = (s[0] + s[1]) + (s[2] + s[3]);
    for (std::size_t i = body; i < n; ++i) {
        total += cell_term(width[i], log_ratio[i], phi_hi[i], phi_lo[i], kappa);
    }
    return total;
}

} // namespace boxfill::kernels
