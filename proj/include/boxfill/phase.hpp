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
#include <vector>

#include "boxfill/model.hpp"
#include "boxfill/policy.hpp"
#include "boxfill/sir.hpp"

namespace boxfill {

/// An upward jump of phi at grid[index]: phi(u) = at, phi(u-) = left_limit.
/// It encodes a zero-transmission interval during which x stays put while y
/// decays, so at / left_limit = exp(alpha * duration).
struct PhaseJump {
    std::size_t index = 0;
    double x = 0.0;
    double at = 0.0;
    double left_limit = 0.0;
};

/// Infected share as a function of the susceptible share, y = phi(x),
/// sampled on a strictly decreasing x-grid (time order).
struct PhaseFunction {
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<PhaseJump> jumps; ///< sorted by index

    std::size_t cells() const { return grid.empty() ? 0 : grid.size() - 1; }

    /// Value at the upper end of cell i (between grid[i] and grid[i+1]):
    /// the left limit if phi jumps at grid[i].
    double upper(std::size_t cell) const;

    /// Secant slopes per cell. The slope of cell i is the right-derivative
    /// estimate at grid[i+1].
    std::vector<double> slopes() const;

    /// Throws NumericError on a non-decreasing grid, a value outside (0, 1)
    /// or a jump that is not upward.
    void validate() const;
};

/// Resamples a trajectory onto its x-grid. Intervals with b = 0 collapse
/// into jump records. Samples closer than min_cell * x to the previous grid
/// point are merged into the next cell: in the tail x barely moves and the
/// per-step integration error would dominate the cell secants. Throws
/// NumericError if x increases anywhere.
PhaseFunction to_phase(const Trajectory& trajectory, double min_cell = 1e-8);

/// J(phi): integral of
///   (beta/alpha) ((1 + phi')/phi - alpha/(beta x phi))_+
/// over the grid plus (beta/alpha) ln(phi(u)/phi(u-)) per jump. Per cell,
/// 1 + phi' - alpha/(beta x) is integrated exactly for the secant phi and
/// 1/phi is taken at the midpoint.
double phase_cost(const ModelParams& params, const PhaseFunction& phi);

struct ConvergedPhaseCost {
    double value = 0.0;
    double last_change = 0.0;
    double output_dt = 0.0;
    int rounds = 0;
};

/// Simulates `policy`, transforms to phase space and evaluates J, halving
/// the sampling interval until successive values differ by at most `tol`
/// (relative to max(1, J)).
ConvergedPhaseCost converged_phase_cost(const ModelParams& params,
                                        const ControlPolicy& policy,
                                        SimConfig cfg,
                                        double tol = 1e-8,
                                        int max_rounds = 6);

/// Root of x - (alpha/beta) ln x = 1 - gamma - (alpha/beta) ln x0 in [alpha/beta, x0].
double solve_x_star(const ModelParams& params);

/// Optimal log-density f*(x): 0 for x <= x*, otherwise
/// -(1 - alpha/(beta x)) / (gamma - (x - x* - (alpha/beta) ln(x/x*))).
/// Throws NumericError when the denominator is not positive.
double optimal_phase_density(const ModelParams& params, double x);

/// F(x) = integral of f* from alpha/beta to x, in closed form.
double optimal_log_phase(const ModelParams& params, double x);

/// nu_F(x) = (1/gamma) (1 - alpha/(beta x)) exp(-F).
double nu(const ModelParams& params, double F, double x);

/// phi*(x) = gamma exp(F(x)) on a grid from x0 down to alpha/beta with
/// `cells_per_unit` cells per unit of x; x* is always a grid point.
PhaseFunction optimal_phase_function(const ModelParams& params, std::size_t cells_per_unit = 20000);

/// Recovers the time parametrization and policy from a jump-free phi:
/// dt = (1 + phi')/(alpha phi) dx (x falls at rate alpha phi/(1 + phi')),
/// b = alpha / (x (1 + phi')). Throws NumericError if phi has jumps or
/// 1 + phi' <= 0 somewhere.
Trajectory reconstruct_policy(const ModelParams& params, const PhaseFunction& phi);

} // namespace boxfill
