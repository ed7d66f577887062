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

#include "boxfill/model.hpp"

#include <cmath>
#include <sstream>

namespace boxfill {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void ModelParams::validate() const {
    if (!positive_finite(alpha)) {
        throw ConfigError("alpha must be a positive finite rate, got " + std::to_string(alpha));
    }
    if (!positive_finite(beta)) {
        throw ConfigError("beta must be a positive finite rate, got " + std::to_string(beta));
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ConfigError("gamma must lie in (0, 1), got " + std::to_string(gamma));
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ConfigError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
    }
}

bool EpidemicState::valid() const {
    return x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0 && x + y <= 1.0;
}

void SimConfig::validate() const {
    if (!positive_finite(rel_tol) || !positive_finite(abs_tol)) {
        throw ConfigError("integrator tolerances must be positive");
    }
    if (!positive_finite(max_step)) throw ConfigError("max_step must be positive");
    if (!positive_finite(y_stop)) throw ConfigError("y_stop must be positive");
    if (!positive_finite(t_max)) throw ConfigError("t_max must be positive");
    if (!positive_finite(output_dt)) throw ConfigError("output_dt must be positive");
}

std::string describe(const ModelParams& p) {
    std::ostringstream os;
    os << "alpha=" << p.alpha << " beta=" << p.beta << " gamma=" << p.gamma
       << " epsilon=" << p.epsilon;
    return os.str();
}

} // namespace boxfill
