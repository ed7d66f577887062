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

#include "boxfill/policies.hpp"

#include <algorithm>
#include <cmath>

#include "boxfill/optimal.hpp"
#include "boxfill/roots.hpp"

namespace boxfill {

ControlPolicy laissez_faire(const ModelParams& params, double horizon) {
    return ControlPolicy({Segment{0.0, horizon, Constant{params.beta}}}, "laissez_faire");
}

double flatten_level(const ModelParams& params) {
    params.validate();
    const double lo = params.alpha / params.x0();
    if (!(lo < params.beta) || !(params.epsilon < params.gamma) || peak_infected(params, params.beta) <= params.gamma) {
        throw NumericError("flatten_level: no delta in (alpha/x0, beta) has peak gamma for " + describe(params));
    }
    const auto f = [&](double delta) { return peak_infected(params, delta) - params.gamma; };
    return bisect_root(f, lo, params.beta, "flatten-the-curve level");
}

ControlPolicy flatten_curve(const ModelParams& params, double horizon, const SimConfig& cfg, FlattenRelease release) {
    const double delta = flatten_level(params);
    const ControlPolicy hold({Segment{0.0, ControlPolicy::forever, Constant{delta}}});
    const EpidemicState init = EpidemicState::initial(params);

    EventSpec ev;
    if (release == FlattenRelease::at_peak) {
        ev = EventSpec::x_reaches(params.alpha / delta);
    } else {
        // Zero once the beta-orbit through the current state peaks at gamma.
        ev = EventSpec{"safe_release", [params](double, const EpidemicState& s) {
                           return peak_from(params, params.beta, s) - params.gamma;
                       }};
    }
    const double t_release = simulate_until(params, hold, init, cfg, ev).event_time;
    if (!(horizon > t_release)) {
        throw ConfigError("horizon ends before the flatten-the-curve release at t = " + std::to_string(t_release));
    }
    return ControlPolicy({Segment{0.0, t_release, Constant{delta}}, Segment{t_release, horizon, Constant{params.beta}}},
                         "flatten_curve");
}

ControlPolicy constant_shutdown(const ModelParams& params, double delta, double t_start, double t_end, double horizon) {
    if (!(t_start >= 0.0 && t_start < t_end && t_end <= horizon)) {
        throw ConfigError("constant_shutdown: need 0 <= t_start < t_end <= horizon");
    }
    if (!(delta >= 0.0)) throw ConfigError("constant_shutdown: delta must be non-negative");
    std::vector<Segment> segs;
    if (t_start > 0.0) segs.push_back(Segment{0.0, t_start, Constant{params.beta}});
    segs.push_back(Segment{t_start, t_end, Constant{delta}});
    if (t_end < horizon) segs.push_back(Segment{t_end, horizon, Constant{params.beta}});
    return ControlPolicy(std::move(segs), "constant_shutdown");
}

CostReport summarize(const ModelParams& params,
                     const ControlPolicy& policy,
                     const Trajectory& trajectory,
                     double feasibility_tol) {
    CostReport r;
    r.policy_name = policy.name();
    r.cost_numeric = trajectory.cost();
    r.max_y = trajectory.max_y;
    r.feasible = r.max_y <= params.gamma + feasibility_tol;

    const Sample& last = trajectory.back();
    const EpidemicState end{last.x, last.y};
    const double b_end = last.b;
    r.x_infinity_estimate = b_end > 0.0 ? limit_susceptible(params, b_end, end) : end.x;
    r.horizon_capped = trajectory.terminated_by == Termination::horizon_cap && b_end < params.beta;

    if (policy.name() == "optimal" || policy.name() == "laissez_faire") {
        r.cost_closed_form = laissez_faire_is_optimal(params) || policy.name() == "laissez_faire"
                                 ? 0.0
                                 : optimal_cost_closed_form(params);
    }
    return r;
}

CostReport evaluate_cost(const ModelParams& params,
                         const ControlPolicy& policy,
                         const SimConfig& cfg,
                         double feasibility_tol) {
    const Trajectory tr = simulate(params, policy, EpidemicState::initial(params), cfg);
    return summarize(params, policy, tr, feasibility_tol);
}

} // namespace boxfill
