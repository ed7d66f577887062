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

#include <doctest.h>

#include <cmath>

#include "boxfill/optimal.hpp"
#include "boxfill/phase.hpp"
#include "boxfill/policies.hpp"
#include "boxfill/sir.hpp"
#include "support.hpp"

using namespace boxfill;
using boxfill::testing::figure_params;

namespace {

double relative_gap(const ModelParams& p, const ControlPolicy& pol) {
    const SimConfig cfg;
    const double c = evaluate_cost(p, pol, cfg).cost_numeric;
    const double j = converged_phase_cost(p, pol, cfg).value;
    // Relative for real costs, absolute when the cost is (near) zero.
    return std::abs(c - j) / std::max(c, 1.0);
}

} // namespace

TEST_CASE("laissez-faire phase function is the orbit and costs nothing") {
    const ModelParams p = figure_params();
    const Trajectory tr = simulate(p, laissez_faire(p, 400.0), EpidemicState::initial(p), SimConfig{});
    const PhaseFunction phi = to_phase(tr);
    CHECK(phi.jumps.empty());
    for (std::size_t i = 0; i < phi.grid.size(); ++i) {
        CHECK(std::abs(phi.values[i] - orbit_constant(p, p.beta, EpidemicState::initial(p), phi.grid[i])) <= 1e-6);
    }
    // Exactly zero in theory; what remains is integrator noise in the tail
    // where phi falls toward y_stop.
    CHECK(std::abs(phase_cost(p, phi)) <= 1e-6);
}

TEST_CASE("zero transmission becomes a jump") {
    const ModelParams p = figure_params();
    const ControlPolicy pol = constant_shutdown(p, 0.0, 4.0, 6.0, 400.0);
    const PhaseFunction phi = to_phase(simulate(p, pol, EpidemicState::initial(p), SimConfig{}));
    REQUIRE(phi.jumps.size() == 1);
    const PhaseJump& j = phi.jumps[0];
    CHECK(j.at / j.left_limit == doctest::Approx(std::exp(2.0 * p.alpha)).epsilon(1e-9));
    // The jump alone contributes beta * duration.
    CHECK(p.beta / p.alpha * std::log(j.at / j.left_limit) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(relative_gap(p, pol) <= 1e-4);
}

TEST_CASE("time-domain and phase-space costs agree") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    CHECK(relative_gap(p, laissez_faire(p, 400.0)) <= 1e-4);
    CHECK(relative_gap(p, build_optimal_policy(p, cfg).first) <= 1e-4);
    CHECK(relative_gap(p, flatten_curve(p, 400.0, cfg)) <= 1e-4);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CAPTURE(seed);
        CHECK(relative_gap(p, boxfill::testing::random_policy(p, seed)) <= 1e-4);
    }
}

TEST_CASE("x* coincides with x(tau1)") {
    const ModelParams p = figure_params();
    CHECK(std::abs(solve_x_star(p) - solve_x_tau1(p)) <= 1e-10);
}

TEST_CASE("optimal density and its multiplier") {
    const ModelParams p = figure_params();
    const double xs = solve_x_star(p);
    CHECK(optimal_log_phase(p, p.x0()) == doctest::Approx(std::log(p.y0() / p.gamma)).epsilon(1e-10));
    CHECK(std::abs(optimal_log_phase(p, p.x0()) - std::log(p.y0() / p.gamma)) <= 1e-8);
    for (int k = 0; k <= 200; ++k) {
        const double x = p.alpha / p.beta + (p.x0() - p.alpha / p.beta) * k / 200.0;
        const double f = optimal_phase_density(p, x);
        const double F = optimal_log_phase(p, x);
        if (x <= xs) {
            CHECK(f == 0.0);
            continue;
        }
        const double sum = f + nu(p, F, x);
        CHECK(sum <= 1e-8);
        CHECK(std::abs(sum) <= 1e-8);
    }
    // F' = f: central difference.
    const double x = 0.5 * (xs + p.x0());
    const double h = 1e-6;
    CHECK((optimal_log_phase(p, x + h) - optimal_log_phase(p, x - h)) / (2 * h) ==
          doctest::Approx(optimal_phase_density(p, x)).epsilon(1e-6));
}

TEST_CASE("optimal phase function") {
    const ModelParams p = figure_params();
    const PhaseFunction phi = optimal_phase_function(p);
    CHECK(phi.values.front() == p.y0());
    CHECK(phi.grid.back() == p.alpha / p.beta);
    const double j = phase_cost(p, phi);
    CHECK(j == doctest::Approx(optimal_cost_closed_form(p)).epsilon(1e-8));

    // Same curve as the simulated optimum.
    const PhaseFunction sim = to_phase(simulate(p, build_optimal_policy(p, SimConfig{}).first,
                                                EpidemicState::initial(p), SimConfig{}));
    for (std::size_t i = 0; i < sim.grid.size(); ++i) {
        if (sim.grid[i] < p.alpha / p.beta) break;
        const double F = optimal_log_phase(p, sim.grid[i]);
        CHECK(std::abs(p.gamma * std::exp(F) - sim.values[i]) <= 1e-5);
    }

    const auto [pol, sol] = build_optimal_policy(p, SimConfig{});
    const Trajectory rec = reconstruct_policy(p, phi);
    CHECK(rec.back().t == doctest::Approx(sol.tau2).epsilon(1e-5));
    CHECK(rec.cost() == doctest::Approx(sol.cost_closed_form).epsilon(1e-5));
    const double xs = solve_x_star(p);
    for (const Sample& s : rec.samples) {
        if (s.x > xs + 1e-3) CHECK(s.b == doctest::Approx(p.beta).epsilon(1e-4));
        if (s.x < xs - 1e-3) CHECK(s.b == doctest::Approx(p.alpha / s.x).epsilon(1e-6));
    }
}

TEST_CASE("reconstruction round trip of a smooth policy") {
    const ModelParams p = figure_params();
    SimConfig cfg;
    cfg.output_dt = 0.01;
    const ControlPolicy pol = constant_shutdown(p, 0.5, 3.0, 20.0, 400.0);
    const Trajectory tr = simulate(p, pol, EpidemicState::initial(p), cfg);
    // Restrict to the suppressed stretch, where x keeps falling at a good rate.
    PhaseFunction phi;
    double t_first = -1.0, t_last = 0.0;
    for (const Sample& s : tr.samples) {
        if (s.t > 3.5 && s.t < 19.5) {
            if (t_first < 0.0) t_first = s.t;
            t_last = s.t;
            phi.grid.push_back(s.x);
            phi.values.push_back(s.y);
        }
    }
    const Trajectory rec = reconstruct_policy(p, phi);
    for (const Sample& s : rec.samples) CHECK(s.b == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(rec.back().t == doctest::Approx(t_last - t_first).epsilon(1e-6));
}

TEST_CASE("invalid phase functions") {
    const ModelParams p = figure_params();
    PhaseFunction phi;
    phi.grid = {0.9, 0.8, 0.85};
    phi.values = {0.1, 0.12, 0.13};
    CHECK_THROWS_AS(phase_cost(p, phi), NumericError);
    phi.grid = {0.9, 0.8, 0.7};
    phi.values = {0.1, 0.0, 0.13};
    CHECK_THROWS_AS(phase_cost(p, phi), NumericError);
    phi.values = {0.1, 0.12, 0.13};
    phi.jumps = {PhaseJump{1, 0.8, 0.12, 0.1}};
    CHECK_NOTHROW(phase_cost(p, phi));
    CHECK_THROWS_AS(reconstruct_policy(p, phi), NumericError);
    // 1 + phi' <= 0: y rises faster than x falls.
    phi.jumps.clear();
    phi.values = {0.1, 0.25, 0.3};
    CHECK_THROWS_AS(reconstruct_policy(p, phi), NumericError);

    ModelParams easy = p;
    easy.gamma = 0.9;
    CHECK_THROWS_AS(solve_x_star(easy), NumericError);
    CHECK_THROWS_AS(optimal_phase_density(p, 1.5), NumericError);
}
