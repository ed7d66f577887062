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
#include <optional>
#include <string>
#include <vector>

#include "boxfill/model.hpp"
#include "boxfill/policy.hpp"

namespace boxfill {

/// Piecewise-constant control on [0, T]: levels[i] holds on
/// (t_grid[i], t_grid[i+1]]. Unregulated (b = beta) after T.
struct DiscretePolicy {
    std::vector<double> t_grid;
    std::vector<double> levels;

    std::size_t size() const { return levels.size(); }
    double horizon() const { return t_grid.empty() ? 0.0 : t_grid.back(); }

    /// Throws ConfigError on a non-increasing grid or a level outside [0, beta].
    void validate(double beta) const;

    /// Exact cost: sum of (beta - level) * width.
    double cost(double beta) const;

    /// The control as a ControlPolicy, with b = beta appended up to `tail_end`.
    ControlPolicy to_control(double beta, double tail_end = ControlPolicy::forever) const;
};

/// Breakpoints used by the search. In the constrained regime with N >= 3 the
/// grid is [0, tau1], N-2 equal cells over [tau1, tau2], then [tau2, T]; with
/// N = 2 it is [0, tau1], [tau1, T]. Otherwise N equal cells on [0, T].
std::vector<double> search_grid(const ModelParams& params, std::size_t n, double horizon, const SimConfig& cfg);

/// Default search horizon: 1.5 tau2 in the constrained regime, 50 otherwise.
double default_search_horizon(const ModelParams& params, const SimConfig& cfg);

struct Evaluation {
    double cost = 0.0;
    double max_y = 0.0;
    bool feasible = false;
};

/// Simulates the policy to T and bounds the unregulated tail analytically.
/// Feasible iff max_y <= gamma + tol.
Evaluation evaluate_discrete(const ModelParams& params,
                             const DiscretePolicy& policy,
                             const SimConfig& cfg,
                             double tol);

enum class Strategy { grid, coordinate_descent, random_restart };
enum class FeasibilityMode { reject, penalty };

const char* to_string(Strategy s);
const char* to_string(FeasibilityMode m);
/// Throws ConfigError on an unknown name.
Strategy parse_strategy(const std::string& name);
FeasibilityMode parse_feasibility_mode(const std::string& name);

struct SearchOptions {
    Strategy strategy = Strategy::coordinate_descent;
    FeasibilityMode feasibility = FeasibilityMode::reject;
    double feasibility_tol = 1e-7;
    double penalty_weight = 1e8;
    /// Coordinate descent steps: start at beta * initial_step_fraction and
    /// halve until below min_step.
    double initial_step_fraction = 0.25;
    double min_step = 1e-4;
    std::size_t grid_levels = 3;
    std::size_t max_grid_candidates = 200000;
    std::size_t restarts = 32;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    /// Starting point for coordinate descent; laissez-faire when empty.
    /// Clipped to feasibility before the descent starts.
    std::optional<std::vector<double>> start_levels;
};

struct SearchReport {
    std::string strategy;
    std::string feasibility_mode;
    std::size_t n = 0;
    double horizon = 0.0;
    double best_cost = 0.0;
    DiscretePolicy best_policy;
    double best_max_y = 0.0;
    double closed_form_cost = 0.0;
    double gap = 0.0; ///< best_cost - closed_form_cost
    std::size_t evaluations = 0;
    /// max(0, max_y - gamma) of the best policy; zero unless within the tolerance band.
    double feasibility_violations_of_best = 0.0;
    /// |cost(project_optimal) - closed_form_cost| at this N and T.
    double discretization_allowance = 0.0;
    double projection_cost = 0.0;
    double projection_max_y = 0.0;
    /// best_cost >= closed_form_cost - (discretization_allowance + 1e-4).
    bool passed = false;
};

/// Searches N-interval controls with levels in [0, beta] on search_grid.
/// Throws ConfigError if N is 0 or above 32, the grid strategy would exceed
/// its candidate budget, or no feasible candidate turns up.
SearchReport brute_force_search(const ModelParams& params,
                                std::size_t n,
                                double horizon,
                                const SimConfig& cfg,
                                const SearchOptions& opts = {});

/// b* sampled at the midpoints of search_grid, clipped to [0, beta].
/// Beta everywhere in the laissez-faire regime.
DiscretePolicy project_optimal(const ModelParams& params, std::size_t n, double horizon, const SimConfig& cfg);

/// Lowers levels where needed so the policy is feasible, one interval at a
/// time from the left: each level becomes the largest value not above the
/// current one that keeps max_y <= gamma + tol/2 on that interval (and, on
/// the last interval, for the unregulated tail). A level that cannot be
/// made feasible ends up at 0.
DiscretePolicy clip_to_feasible(const ModelParams& params,
                                DiscretePolicy policy,
                                const SimConfig& cfg,
                                double tol);

struct LocalProbe {
    double base_cost = 0.0;
    /// Largest cost reduction among feasible single-level moves; <= 0 means
    /// none improves.
    double best_improvement = 0.0;
    std::size_t evaluations = 0;
};

/// Tries +-step on every level for each step in `steps`.
LocalProbe local_optimality_probe(const ModelParams& params,
                                  const DiscretePolicy& policy,
                                  const SimConfig& cfg,
                                  double tol,
                                  const std::vector<double>& steps);

struct Perturbation {
    std::string kind; ///< lower_before_tau1, raise_on_ramp, lower_on_ramp, raise_after_tau2
    std::size_t interval = 0;
    double delta = 0.0;
    double cost_delta = 0.0;
    double max_y = 0.0;
    bool feasible = false;
    bool as_expected = false;
};

struct UniquenessReport {
    double base_cost = 0.0;
    std::vector<Perturbation> perturbations;
    bool consistent = false; ///< every perturbation behaved as expected
};

/// Perturbs the feasible-clipped projection of b*. Lowered levels are
/// followed by clip_to_feasible on the remaining intervals and should cost
/// more; raising on the ramp should be infeasible; after tau2 raising
/// toward beta should change nothing.
/// Throws NumericError in the laissez-faire regime.
UniquenessReport uniqueness_probe(const ModelParams& params,
                                  std::size_t n,
                                  double horizon,
                                  const SimConfig& cfg,
                                  double budget = 0.05);

} // namespace boxfill
