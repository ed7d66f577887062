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

#include "boxfill/optimal.hpp"

#include <cmath>

#include "boxfill/roots.hpp"
#include "boxfill/sir.hpp"

namespace boxfill {

namespace {

constexpr double boundary_tol = 1e-12;

// gamma minus the unregulated peak; >= 0 means the constraint never binds.
double peak_margin(const ModelParams& p) {
    const double r = p.alpha / p.beta;
    return p.gamma - (1.0 + r * std::log(r / p.x0()) - r);
}

// Same condition written as a threshold on gamma.
double threshold_margin(const ModelParams& p) {
    const double r = p.alpha / p.beta;
    return p.gamma - r * (std::log(r) - 1.0 + 1.0 / r - std::log(p.x0()));
}

} // namespace

const char* to_string(Regime r) {
    return r == Regime::constrained ? "constrained" : "laissez_faire_optimal";
}

bool laissez_faire_is_optimal(const ModelParams& params) {
    params.validate();
    if (params.alpha >= params.beta) return true;
    const double a = peak_margin(params);
    const double b = threshold_margin(params);
    const bool lf_peak = a >= -boundary_tol;
    const bool lf_threshold = b >= -boundary_tol;
    if (lf_peak != lf_threshold && std::abs(a - b) > 1e-9) {
        throw NumericError("laissez-faire tests disagree for " + describe(params));
    }
    return lf_peak;
}

double solve_x_tau1(const ModelParams& params) {
    if (laissez_faire_is_optimal(params)) {
        throw NumericError("solve_x_tau1: laissez-faire regime, the constraint never binds");
    }
    const double r = params.alpha / params.beta;
    const double x0 = params.x0();
    const auto f = [&](double x) { return x - (1.0 - params.gamma + r * std::log(x / x0)); };
    return bisect_root(f, r, x0, "shutdown onset fixed point");
}

double compute_tau1(const ModelParams& params, const SimConfig& cfg) {
    if (laissez_faire_is_optimal(params)) {
        throw InfeasibleQuery("compute_tau1: the unregulated peak stays below gamma");
    }
    const ControlPolicy lf({Segment{0.0, ControlPolicy::forever, Constant{params.beta}}}, "laissez_faire");
    const EventResult ev =
        simulate_until(params, lf, EpidemicState::initial(params), cfg, EventSpec::y_reaches(params.gamma));
    const double x_root = solve_x_tau1(params);
    if (std::abs(ev.event_state.x - x_root) > 1e-6) {
        throw NumericError("integrator event x = " + std::to_string(ev.event_state.x) +
                           " disagrees with fixed point " + std::to_string(x_root));
    }
    return ev.event_time;
}

double optimal_cost_closed_form(const ModelParams& params) {
    const double ratio = params.beta * solve_x_tau1(params) / params.alpha;
    return (ratio - 1.0 - std::log(ratio)) / params.gamma;
}

double normalized_min_cost_from_x_tau1(const ModelParams& params) {
    const double x = solve_x_tau1(params);
    const double r = params.alpha / params.beta;
    return (x - r * std::log(x)) / params.gamma + r / params.gamma * (std::log(r) - 1.0);
}

double normalized_min_cost_from_x0(const ModelParams& params) {
    if (laissez_faire_is_optimal(params)) {
        throw NumericError("normalized_min_cost_from_x0: laissez-faire regime");
    }
    const double r = params.alpha / params.beta;
    return r / params.gamma * (std::log(r) - 1.0 + 1.0 / r - std::log(params.x0())) - 1.0;
}

std::pair<ControlPolicy, OptimalSolution> build_optimal_policy(const ModelParams& params,
                                                               const SimConfig& cfg,
                                                               double horizon) {
    if (horizon <= 0.0) horizon = cfg.t_max;
    OptimalSolution sol;
    if (laissez_faire_is_optimal(params)) {
        ControlPolicy lf({Segment{0.0, horizon, Constant{params.beta}}}, "optimal");
        return {std::move(lf), sol};
    }
    sol.regime = Regime::constrained;
    sol.tau1 = compute_tau1(params, cfg);
    sol.x_tau1 = solve_x_tau1(params);
    sol.tau2 = sol.tau1 + (sol.x_tau1 - params.alpha / params.beta) / (params.alpha * params.gamma);
    sol.jump_level = params.alpha / sol.x_tau1;
    sol.cost_closed_form = optimal_cost_closed_form(params);
    if (!(horizon > sol.tau2)) {
        throw ConfigError("horizon " + std::to_string(horizon) + " ends before the release time " +
                          std::to_string(sol.tau2));
    }
    std::vector<Segment> segs{
        Segment{0.0, sol.tau1, Constant{params.beta}},
        Segment{sol.tau1, sol.tau2, OptimalRamp{sol.tau2, params.beta, params.gamma}},
        Segment{sol.tau2, horizon, Constant{params.beta}},
    };
    return {ControlPolicy(std::move(segs), "optimal"), sol};
}

} // namespace boxfill
