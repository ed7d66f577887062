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

#include <optional>
#include <string>

#include "boxfill/model.hpp"
#include "boxfill/policy.hpp"
#include "boxfill/sir.hpp"

namespace boxfill {

/// b = beta on [0, horizon].
ControlPolicy laissez_faire(const ModelParams& params, double horizon);

enum class FlattenRelease {
    /// Keep delta until the unregulated continuation can no longer exceed
    /// gamma, then release. Feasible.
    when_safe,
    /// Release as soon as the delta-wave peaks (x = alpha/delta). The
    /// release restarts growth, so this variant overshoots gamma.
    at_peak,
};

/// Constant level delta < beta whose peak equals gamma, found by bisection.
double flatten_level(const ModelParams& params);

/// Constant suppression at flatten_level, released to beta according to `release`.
ControlPolicy flatten_curve(const ModelParams& params,
                            double horizon,
                            const SimConfig& cfg,
                            FlattenRelease release = FlattenRelease::when_safe);

/// beta outside [t_start, t_end], delta inside.
ControlPolicy constant_shutdown(const ModelParams& params, double delta, double t_start, double t_end, double horizon);

struct CostReport {
    std::string policy_name;
    double cost_numeric = 0.0;
    std::optional<double> cost_closed_form;
    bool feasible = false;
    double max_y = 0.0;
    double x_infinity_estimate = 0.0;
    /// The run stopped at the horizon while [beta - b]_+ was still positive,
    /// so cost_numeric understates an unbounded cost.
    bool horizon_capped = false;
};

constexpr double default_feasibility_tol = 1e-7;

/// Simulates `policy` from the initial state and summarizes its cost and
/// ICU feasibility (max_y <= gamma + feasibility_tol).
CostReport evaluate_cost(const ModelParams& params,
                         const ControlPolicy& policy,
                         const SimConfig& cfg,
                         double feasibility_tol = default_feasibility_tol);

/// Same, reusing an already simulated trajectory.
CostReport summarize(const ModelParams& params,
                     const ControlPolicy& policy,
                     const Trajectory& trajectory,
                     double feasibility_tol = default_feasibility_tol);

} // namespace boxfill
