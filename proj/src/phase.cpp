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

#include "boxfill/phase.hpp"

#include <algorithm>
#include <cmath>

#include "boxfill/kernels.hpp"
#include "boxfill/optimal.hpp"
#include "boxfill/roots.hpp"

namespace boxfill {

double PhaseFunction::upper(std::size_t cell) const {
    // jumps is sorted and short; a linear probe is fine.
    for (const PhaseJump& j : jumps) {
        if (j.index == cell) return j.left_limit;
        if (j.index > cell) break;
    }
    return values[cell];
}

std::vector<double> PhaseFunction::slopes() const {
    std::vector<double> s(cells());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = (upper(i) - values[i + 1]) / (grid[i] - grid[i + 1]);
    }
    return s;
}

void PhaseFunction::validate() const {
    if (grid.size() != values.size() || grid.empty()) {
        throw NumericError("phase function: grid and values differ in length or are empty");
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (!(grid[i + 1] < grid[i])) throw NumericError("phase function: grid is not strictly decreasing");
    }
    for (double v : values) {
        if (!(v > 0.0 && v < 1.0)) throw NumericError("phase function: value outside (0, 1)");
    }
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        const PhaseJump& j = jumps[k];
        if (j.index >= grid.size() || (k > 0 && jumps[k - 1].index >= j.index)) {
            throw NumericError("phase function: jump index out of order");
        }
        if (!(j.left_limit > 0.0) || !(j.at > j.left_limit)) {
            throw NumericError("phase function: jump is not upward with a positive left limit");
        }
    }
}

PhaseFunction to_phase(const Trajectory& trajectory, double min_cell) {
    const auto& s = trajectory.samples;
    if (s.empty()) throw NumericError("to_phase: empty trajectory");
    PhaseFunction phi;
    phi.grid.push_back(s.front().x);
    phi.values.push_back(s.front().y);
    // A sample too close in x to the last grid point is held back and only
    // used if a jump or the end of the run needs it.
    const Sample* pending = nullptr;
    const auto flush = [&] {
        if (pending == nullptr) return;
        if (pending->x < phi.grid.back()) {
            phi.grid.push_back(pending->x);
            phi.values.push_back(pending->y);
        } else {
            phi.values.back() = pending->y;
        }
        pending = nullptr;
    };
    bool in_jump = false;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const Sample& cur = s[i];
        if (cur.b == 0.0) {
            // Zero transmission on (t_{i-1}, t_i]: x is frozen, y decays.
            flush();
            if (cur.x != phi.grid.back()) throw NumericError("to_phase: x moved during a zero-transmission interval");
            if (!in_jump) {
                phi.jumps.push_back(PhaseJump{phi.grid.size() - 1, cur.x, phi.values.back(), cur.y});
                in_jump = true;
            } else {
                phi.jumps.back().left_limit = cur.y;
            }
            continue;
        }
        const double x_last = phi.grid.back();
        if (cur.x > x_last) {
            throw NumericError("to_phase: x increases at t = " + std::to_string(cur.t));
        }
        in_jump = false;
        if (x_last - cur.x < min_cell * x_last) {
            pending = &cur;
            continue;
        }
        pending = nullptr;
        phi.grid.push_back(cur.x);
        phi.values.push_back(cur.y);
    }
    flush();
    phi.validate();
    return phi;
}

double phase_cost(const ModelParams& params, const PhaseFunction& phi) {
    phi.validate();
    const std::size_t n = phi.cells();
    std::vector<double> width(n), log_ratio(n), p_hi(n), p_lo(n);
    for (std::size_t i = 0; i < n; ++i) {
        width[i] = phi.grid[i] - phi.grid[i + 1];
        log_ratio[i] = std::log1p(width[i] / phi.grid[i + 1]);
        p_hi[i] = phi.upper(i);
        p_lo[i] = phi.values[i + 1];
    }
    const double kappa = params.alpha / params.beta;
    double jumps = 0.0;
    for (const PhaseJump& j : phi.jumps) jumps += std::log(j.at / j.left_limit);
    const double integral = kernels::lagrangian_sum(width, log_ratio, p_hi, p_lo, kappa);
    return (params.beta / params.alpha) * (integral + jumps);
}

ConvergedPhaseCost converged_phase_cost(const ModelParams& params,
                                        const ControlPolicy& policy,
                                        SimConfig cfg,
                                        double tol,
                                        int max_rounds) {
    ConvergedPhaseCost out;
    double prev = 0.0;
    for (int round = 0; round < max_rounds; ++round) {
        const Trajectory tr = simulate(params, policy, EpidemicState::initial(params), cfg);
        const double value = phase_cost(params, to_phase(tr));
        out.rounds = round + 1;
        out.output_dt = cfg.output_dt;
        if (round > 0) {
            out.last_change = std::abs(value - prev);
            out.value = value;
            if (out.last_change <= tol * std::max(1.0, std::abs(value))) return out;
        }
        out.value = value;
        prev = value;
        cfg.output_dt *= 0.5;
    }
    return out;
}

double solve_x_star(const ModelParams& params) {
    if (laissez_faire_is_optimal(params)) {
        throw NumericError("solve_x_star: laissez-faire regime, no binding constraint");
    }
    const double r = params.alpha / params.beta;
    const double rhs = 1.0 - params.gamma - r * std::log(params.x0());
    const auto f = [&](double x) { return x - r * std::log(x) - rhs; };
    return bisect_root(f, r, params.x0(), "x* equation");
}

double optimal_phase_density(const ModelParams& params, double x) {
    const double xs = solve_x_star(params);
    if (x <= xs) return 0.0;
    const double r = params.alpha / params.beta;
    const double denom = params.gamma - (x - xs - r * std::log(x / xs));
    if (!(denom > 0.0)) {
        throw NumericError("optimal_phase_density: x = " + std::to_string(x) + " beyond the admissible range");
    }
    return -(1.0 - r / x) / denom;
}

double optimal_log_phase(const ModelParams& params, double x) {
    const double xs = solve_x_star(params);
    if (x <= xs) return 0.0;
    const double r = params.alpha / params.beta;
    const double e = 1.0 - (x - xs - r * std::log(x / xs)) / params.gamma;
    if (!(e > 0.0)) throw NumericError("optimal_log_phase: x beyond the admissible range");
    return std::log(e);
}

double nu(const ModelParams& params, double F, double x) {
    return (1.0 - params.alpha / (params.beta * x)) * std::exp(-F) / params.gamma;
}

PhaseFunction optimal_phase_function(const ModelParams& params, std::size_t cells_per_unit) {
    const double xs = solve_x_star(params);
    const double x0 = params.x0();
    const double lo = params.alpha / params.beta;
    const double r = lo;
    const auto phi_star = [&](double x) {
        if (x <= xs) return params.gamma;
        return params.gamma - (x - xs - r * std::log(x / xs));
    };
    PhaseFunction phi;
    const auto add_span = [&](double from, double to, bool include_end) {
        const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((from - to) * cells_per_unit)));
        for (std::size_t i = 0; i < n; ++i) {
            const double x = from - (from - to) * static_cast<double>(i) / static_cast<double>(n);
            phi.grid.push_back(x);
            phi.values.push_back(phi_star(x));
        }
        if (include_end) {
            phi.grid.push_back(to);
            phi.values.push_back(phi_star(to));
        }
    };
    add_span(x0, xs, false);
    add_span(xs, lo, true);
    phi.values.front() = params.y0();
    phi.validate();
    return phi;
}

Trajectory reconstruct_policy(const ModelParams& params, const PhaseFunction& phi) {
    phi.validate();
    if (!phi.jumps.empty()) throw NumericError("reconstruct_policy: phase function has jumps");
    const std::size_t n = phi.cells();
    if (n == 0) throw NumericError("reconstruct_policy: need at least one cell");
    const std::vector<double> s = phi.slopes();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(1.0 + s[i] > 0.0)) {
            throw NumericError("reconstruct_policy: 1 + phi' <= 0 near x = " + std::to_string(phi.grid[i]));
        }
    }
    // Node derivatives: linear interpolation of the cell secants, which are
    // second-order estimates at the cell midpoints.
    std::vector<double> d(n + 1);
    d[0] = s[0];
    d[n] = s[n - 1];
    for (std::size_t j = 1; j < n; ++j) {
        const double m_prev = 0.5 * (phi.grid[j - 1] + phi.grid[j]);
        const double m_next = 0.5 * (phi.grid[j] + phi.grid[j + 1]);
        const double w = (m_prev - phi.grid[j]) / (m_prev - m_next);
        d[j] = s[j - 1] + (s[j] - s[j - 1]) * w;
    }

    Trajectory tr;
    tr.terminated_by = Termination::horizon_cap;
    double t = 0.0;
    double cost = 0.0;
    double b_prev = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double x = phi.grid[j];
        const double b = params.alpha / (x * (1.0 + d[j]));
        if (j > 0) {
            const double h = phi.grid[j - 1] - x;
            const double phim = 0.5 * (phi.values[j - 1] + phi.values[j]);
            const double dt = (h + (phi.values[j - 1] - phi.values[j])) / (params.alpha * phim);
            t += dt;
            cost += 0.5 * dt * (std::max(params.beta - b_prev, 0.0) + std::max(params.beta - b, 0.0));
        }
        tr.samples.push_back(Sample{t, x, phi.values[j], b, cost});
        tr.max_y = std::max(tr.max_y, phi.values[j]);
        b_prev = b;
    }
    return tr;
}

} // namespace boxfill
