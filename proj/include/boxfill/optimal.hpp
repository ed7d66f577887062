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

#include <utility>

#include "boxfill/model.hpp"
#include "boxfill/policy.hpp"

namespace boxfill {

enum class Regime { laissez_faire_optimal, constrained };

const char* to_string(Regime r);

/// The shutdown-and-release solution: unregulated until y first reaches
/// gamma at tau1, then b = alpha/x(t) holding y at gamma until x reaches
/// alpha/beta at tau2, then unregulated again.
struct OptimalSolution {
    Regime regime = Regime::laissez_faire_optimal;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double x_tau1 = 0.0;
    double jump_level = 0.0;       ///< b just after tau1, alpha / x_tau1
    double cost_closed_form = 0.0; ///< minimized cost, time units
};

/// Peak-based test 1 + (a/b) ln(a/(b x0)) - a/b <= gamma, cross-checked against
/// the equivalent threshold form of the minimum cost. Boundary cases within
/// 1e-12 count as laissez-faire. alpha >= beta is always laissez-faire.
bool laissez_faire_is_optimal(const ModelParams& params);

/// Larger root of x = 1 - gamma + (alpha/beta) ln(x / (1 - epsilon)), bracketed
/// by [alpha/beta, 1 - epsilon]. Throws NumericError in the laissez-faire regime.
double solve_x_tau1(const ModelParams& params);

/// First time the unregulated epidemic reaches gamma, from the integrator's
/// event. Throws NumericError if the event's x disagrees with solve_x_tau1 by
/// more than 1e-6, InfeasibleQuery if y never reaches gamma.
double compute_tau1(const ModelParams& params, const SimConfig& cfg);

/// Minimized cost (1/gamma) [r - 1 - ln r] with r = beta x_tau1 / alpha.
double optimal_cost_closed_form(const ModelParams& params);

/// Paper-normalized forms of the minimum (alpha/beta times the cost above):
/// the x_tau1 form and the x0 form. They agree to rounding.
double normalized_min_cost_from_x_tau1(const ModelParams& params);
double normalized_min_cost_from_x0(const ModelParams& params);

/// Builds the optimal policy covering [0, horizon]. In the laissez-faire
/// regime this is a single b = beta segment.
std::pair<ControlPolicy, OptimalSolution> build_optimal_policy(const ModelParams& params,
                                                               const SimConfig& cfg,
                                                               double horizon = 0.0);

} // namespace boxfill
