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

#include <cstddef>
#include <cstdint>
#include <string>

#include "boxfill/model.hpp"
#include "boxfill/policies.hpp"
#include "boxfill/policy.hpp"
#include "boxfill/verify.hpp"

namespace boxfill::cli {

struct RunConfig {
    ModelParams params;
    SimConfig sim;
    double horizon = 0.0; ///< 0: use sim.t_max
    std::string output_dir = ".";
    std::string policy = "optimal";
    FlattenRelease release = FlattenRelease::when_safe;
    std::size_t n = 16;
    double search_horizon = 0.0; ///< 0: default_search_horizon
    Strategy strategy = Strategy::coordinate_descent;
    FeasibilityMode feasibility = FeasibilityMode::reject;
    std::size_t restarts = 32;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double feasibility_tol = 1e-7;

    double effective_horizon() const { return horizon > 0.0 ? horizon : sim.t_max; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Reads an INI file with sections [params], [sim] and [run]. Unknown
/// sections or keys and unparsable values raise ConfigError naming the key.
RunConfig load_config(const std::string& path);

/// Resolves a policy spec: laissez_faire | flatten_curve | optimal |
/// constant:<delta>:<t1>:<t2> | file:<path>. File policies are CSV with a
/// `t_start,t_end,level` header; the span after the last row runs at beta.
ControlPolicy resolve_policy(const RunConfig& cfg, const std::string& spec);

} // namespace boxfill::cli
