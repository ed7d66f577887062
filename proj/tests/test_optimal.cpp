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
#include "boxfill/sir.hpp"
#include "support.hpp"

using namespace boxfill;
using boxfill::testing::figure_params;

TEST_CASE("figure parameters: reference values") {
    const ModelParams p = figure_params();
    CHECK_FALSE(laissez_faire_is_optimal(p));
    CHECK(solve_x_tau1(p) == doctest::Approx(0.692995621249243).epsilon(1e-12));
    const auto [pol, sol] = build_optimal_policy(p, SimConfig{});
    CHECK(sol.regime == Regime::constrained);
    CHECK(sol.tau1 == doctest::Approx(5.0082994299).epsilon(1e-9));
    CHECK(sol.tau2 == doctest::Approx(11.5582264507).epsilon(1e-9));
    CHECK(sol.jump_level == doctest::Approx(p.alpha / sol.x_tau1).epsilon(1e-15));
    CHECK(sol.cost_closed_form == doctest::Approx(2.3637209909703).epsilon(1e-11));
    CHECK(normalized_min_cost_from_x_tau1(p) == doctest::Approx(0.70911629729).epsilon(1e-10));
    CHECK(std::abs(normalized_min_cost_from_x_tau1(p) - normalized_min_cost_from_x0(p)) <= 1e-12);
    CHECK(sol.cost_closed_form == doctest::Approx(p.beta / p.alpha * normalized_min_cost_from_x0(p)).epsilon(1e-12));
}

TEST_CASE("the optimal trajectory fills the box") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    const auto [pol, sol] = build_optimal_policy(p, cfg);
    const Trajectory tr = simulate(p, pol, EpidemicState::initial(p), cfg);
    double x_at_tau2 = -1.0;
    for (const Sample& s : tr.samples) {
        if (s.t >= sol.tau1 && s.t <= sol.tau2) CHECK(std::abs(s.y - p.gamma) <= 1e-6);
        if (s.t < sol.tau1) CHECK(s.b == p.beta);
        if (s.t == sol.tau2) x_at_tau2 = s.x;
    }
    CHECK(std::abs(x_at_tau2 - p.alpha / p.beta) <= 1e-6);
    CHECK(tr.max_y <= p.gamma + 1e-8);
    // Discontinuous drop right after tau1.
    CHECK(pol.rate(sol.tau1) == p.beta);
    CHECK(pol.rate(std::nextafter(sol.tau1, 100.0)) == doctest::Approx(sol.jump_level).epsilon(1e-12));
    CHECK(pol.rate(sol.tau2) == doctest::Approx(p.beta).epsilon(1e-15));
    CHECK(tr.cost() == doctest::Approx(sol.cost_closed_form).epsilon(1e-6));
}

TEST_CASE("event and root agree on x(tau1)") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    const double t1 = compute_tau1(p, cfg);
    const EventResult r = simulate_until(p, ControlPolicy({Segment{0.0, 400.0, Constant{p.beta}}}),
                                         EpidemicState::initial(p), cfg, EventSpec::y_reaches(p.gamma));
    CHECK(r.event_time == t1);
    CHECK(std::abs(r.event_state.x - solve_x_tau1(p)) <= 1e-6);
}

TEST_CASE("laissez-faire regimes") {
    ModelParams p = figure_params();
    p.gamma = 0.99;
    CHECK(laissez_faire_is_optimal(p));
    CHECK_THROWS_AS(solve_x_tau1(p), NumericError);
    auto [pol, sol] = build_optimal_policy(p, SimConfig{});
    CHECK(sol.regime == Regime::laissez_faire_optimal);
    CHECK(sol.cost_closed_form == 0.0);
    CHECK(pol.segments().size() == 1);

    ModelParams q = figure_params();
    q.alpha = 1.2;
    CHECK(laissez_faire_is_optimal(q));

    // Right at the boundary: gamma equal to the unregulated peak.
    ModelParams edge = figure_params();
    const double r = edge.alpha / edge.beta;
    edge.gamma = 1.0 - r + r * std::log(r / edge.x0());
    CHECK(laissez_faire_is_optimal(edge));
    edge.gamma -= 1e-6;
    CHECK_FALSE(laissez_faire_is_optimal(edge));
}

TEST_CASE("closed-form forms agree on a 5x5 grid") {
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            ModelParams p;
            p.beta = 1.0;
            p.alpha = 0.15 + 0.06 * i;  // 0.15 .. 0.39
            p.gamma = 0.05 + 0.02 * j;  // 0.05 .. 0.13
            p.epsilon = 0.01;
            REQUIRE_FALSE(laissez_faire_is_optimal(p));
            const double a = normalized_min_cost_from_x_tau1(p);
            const double b = normalized_min_cost_from_x0(p);
            CHECK(std::abs(a - b) <= 1e-12);
            CHECK(optimal_cost_closed_form(p) == doctest::Approx(a * p.beta / p.alpha).epsilon(1e-12));
        }
    }
}

TEST_CASE("minimum cost decreases in gamma") {
    ModelParams p = figure_params();
    double prev = std::numeric_limits<double>::infinity();
    for (double g = 0.05; g < 0.34; g += 0.02) {
        p.gamma = g;
        const double c = laissez_faire_is_optimal(p) ? 0.0 : optimal_cost_closed_form(p);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("horizon must cover the release") {
    const ModelParams p = figure_params();
    CHECK_THROWS_AS(build_optimal_policy(p, SimConfig{}, 10.0), ConfigError);
}
