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

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "boxfill/model.hpp"
#include "boxfill/policy.hpp"

namespace boxfill::testing {

inline ModelParams figure_params() { return ModelParams{0.3, 1.0, 0.2, 0.01}; }

/// Five constant pieces with random breakpoints in (0, 30) and levels in
/// [0, beta], then beta to `horizon`. Every third seed gets one zero level.
inline ControlPolicy random_policy(const ModelParams& p, std::uint64_t seed, double horizon = 400.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> t(0.5, 30.0);
    std::uniform_real_distribution<double> level(0.0, p.beta);
    std::vector<double> cuts{t(rng), t(rng), t(rng), t(rng), t(rng)};
    std::sort(cuts.begin(), cuts.end());
    std::vector<Segment> segs;
    double start = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        double l = level(rng);
        if (seed % 3 == 0 && i == 2) l = 0.0;
        segs.push_back(Segment{start, cuts[i], Constant{l}});
        start = cuts[i];
    }
    segs.push_back(Segment{start, horizon, Constant{p.beta}});
    return ControlPolicy(std::move(segs), "random");
}

} // namespace boxfill::testing
