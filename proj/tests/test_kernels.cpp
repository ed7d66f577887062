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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "boxfill/kernels.hpp"

using namespace boxfill::kernels;

namespace {

struct Cells {
    std::vector<double> h, lr, p_hi, p_lo;
};

Cells random_cells(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Cells c;
    double x = 0.99;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = 1e-3 * (0.1 + u(rng));
        c.h.push_back(h);
        c.lr.push_back(std::log(x / (x - h)));
        x -= h;
        c.p_hi.push_back(0.01 + 0.2 * u(rng));
        c.p_lo.push_back(0.01 + 0.2 * u(rng));
    }
    return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("scalar reduction on a hand-computed cell") {
    // Cell [0.6, 0.8] with phi from 0.1 up to 0.2.
    const std::vector<double> h{0.2}, lr{std::log(0.8 / 0.6)}, ph{0.2}, pl{0.1};
    CHECK(lagrangian_sum_scalar(h, lr, ph, pl, 0.3) == doctest::Approx((0.3 - 0.3 * std::log(0.8 / 0.6)) / 0.15));
    // Negative integrand is clipped to zero.
    const std::vector<double> pl2{0.5};
    CHECK(lagrangian_sum_scalar(h, lr, ph, pl2, 0.3) == 0.0);
}

TEST_CASE("avx2 and scalar reductions are bitwise identical") {
    if (!avx2_available()) {
        MESSAGE("AVX2 not available; only the scalar path is exercised");
        return;
    }
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1001u, 20000u}) {
        const Cells c = random_cells(n, 7 + n);
        for (double kappa : {0.0, 0.3, 2.5}) {
            const double s = lagrangian_sum_scalar(c.h, c.lr, c.p_hi, c.p_lo, kappa);
            const double v = lagrangian_sum_avx2(c.h, c.lr, c.p_hi, c.p_lo, kappa);
            CAPTURE(n);
            CHECK(same_bits(s, v));
        }
    }
}

TEST_CASE("dispatch") {
    const Cells c = random_cells(100, 3);
    const double d = lagrangian_sum(c.h, c.lr, c.p_hi, c.p_lo, 0.3);
    CHECK(same_bits(d, lagrangian_sum_scalar(c.h, c.lr, c.p_hi, c.p_lo, 0.3)));
    const std::vector<double> shorter(99, 0.5);
    CHECK_THROWS_AS(lagrangian_sum(c.h, shorter, c.p_hi, c.p_lo, 0.3), std::invalid_argument);
    CHECK((active_isa() == Isa::avx2) == (avx2_available() && std::getenv("BOXFILL_KERNEL") == nullptr));
}
