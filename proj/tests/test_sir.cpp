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
#include "boxfill/policies.hpp"
#include "boxfill/sir.hpp"
#include "support.hpp"

using namespace boxfill;
using boxfill::testing::figure_params;

namespace {

void check_monotone(const Trajectory& tr) {
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const Sample& a = tr.samples[i - 1];
        const Sample& b = tr.samples[i];
        REQUIRE(b.t > a.t);
        REQUIRE(b.x <= a.x);
        REQUIRE(b.x + b.y <= a.x + a.y + 1e-15);
        REQUIRE(b.y > 0.0);
    }
}

// On every constant piece, compare y against the orbit through the state at
// the start of the piece.
double worst_orbit_error(const ModelParams& p, const ControlPolicy& policy, const Trajectory& tr) {
    double worst = 0.0;
    std::size_t seg = ControlPolicy::npos;
    EpidemicState anchor;
    for (const Sample& s : tr.samples) {
        const std::size_t k = policy.segment_at(s.t);
        // The sample at a breakpoint still belongs to the left piece; it is
        // also the anchor of the next one.
        if (k != seg) {
            seg = k;
            anchor = {s.x, s.y};
            continue;
        }
        const auto* c = std::get_if<Constant>(&policy.segments()[k].shape);
        if (c == nullptr || c->level == 0.0) {
            anchor = {s.x, s.y};
            continue;
        }
        worst = std::max(worst, std::abs(s.y - orbit_constant(p, c->level, anchor, s.x)));
        if (s.t == policy.segments()[k].t_end) anchor = {s.x, s.y};
    }
    return worst;
}

} // namespace

TEST_CASE("laissez-faire follows the closed-form orbit") {
    const ModelParams p = figure_params();
    const ControlPolicy lf = laissez_faire(p, 400.0);
    const Trajectory tr = simulate(p, lf, EpidemicState::initial(p), SimConfig{});
    const EpidemicState init = EpidemicState::initial(p);
    for (const Sample& s : tr.samples) CHECK(std::abs(s.y - orbit_constant(p, p.beta, init, s.x)) <= 1e-8);
    check_monotone(tr);
    CHECK(tr.terminated_by == Termination::y_below_stop);
    CHECK(tr.cost() == 0.0);
}

TEST_CASE("peak of the unregulated wave") {
    const ModelParams p = figure_params();
    const Trajectory tr = simulate(p, laissez_faire(p, 400.0), EpidemicState::initial(p), SimConfig{});
    // Peak at x = alpha/beta: y0 + x0 - a/b + (a/b) ln(a/(b x0)).
    const double r = p.alpha / p.beta;
    const double expected = 1.0 - r + r * std::log(r / p.x0());
    CHECK(peak_infected(p, p.beta) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(tr.max_y == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(tr.back().x + 0.0 - tr.samples[0].x) > 0.5);
    // Already past the threshold: the peak is the current level.
    CHECK(peak_from(p, p.beta, EpidemicState{0.25, 0.1}) == 0.1);
    CHECK(peak_infected(p, 0.2) == p.epsilon);
}

TEST_CASE("final susceptible share solves the fixed-point equation") {
    const ModelParams p = figure_params();
    SimConfig cfg;
    cfg.y_stop = 1e-12;
    for (double delta : {1.0, 0.6, 0.4}) {
        const ControlPolicy c({Segment{0.0, 1000.0, Constant{delta}}});
        cfg.t_max = 1000.0;
        const Trajectory tr = simulate(p, c, EpidemicState::initial(p), cfg);
        const double x_inf = limit_susceptible(p, delta, EpidemicState::initial(p));
        CHECK(std::abs(tr.back().x - x_inf) <= 1e-4);
        CHECK(x_inf == doctest::Approx((p.alpha / delta) * std::log(x_inf / p.x0()) + 1.0).epsilon(1e-12));
    }
    // Negligible infections left: nothing more happens.
    const EpidemicState quiet{0.2, 1e-13};
    CHECK(limit_susceptible(p, 1.0, quiet) == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("orbit conservation on constant pieces") {
    const ModelParams p = figure_params();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ControlPolicy pol = boxfill::testing::random_policy(p, seed);
        const Trajectory tr = simulate(p, pol, EpidemicState::initial(p), SimConfig{});
        check_monotone(tr);
        CHECK(worst_orbit_error(p, pol, tr) <= 1e-8);
    }
}

TEST_CASE("zero transmission freezes x and decays y exponentially") {
    const ModelParams p = figure_params();
    const ControlPolicy pol = constant_shutdown(p, 0.0, 3.0, 7.0, 400.0);
    const Trajectory tr = simulate(p, pol, EpidemicState::initial(p), SimConfig{});
    const Sample* at3 = nullptr;
    const Sample* at7 = nullptr;
    for (const Sample& s : tr.samples) {
        if (s.t == 3.0) at3 = &s;
        if (s.t == 7.0) at7 = &s;
    }
    REQUIRE(at3 != nullptr);
    REQUIRE(at7 != nullptr);
    CHECK(at7->x == at3->x);
    CHECK(at7->y == doctest::Approx(at3->y * std::exp(-4.0 * p.alpha)).epsilon(1e-10));
    CHECK(at7->b == 0.0);
    CHECK(tr.cost() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("cost channel matches the exact integral of the policy") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    const auto [pol, sol] = build_optimal_policy(p, cfg);
    const Trajectory tr = simulate(p, pol, EpidemicState::initial(p), cfg);
    for (const Sample& s : tr.samples) CHECK(std::abs(s.cumulative_cost - pol.cost_until(s.t, p.beta)) <= 1e-8);
}

TEST_CASE("event location") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    const EventResult r = simulate_until(p, laissez_faire(p, 400.0), EpidemicState::initial(p), cfg,
                                         EventSpec::y_reaches(p.gamma));
    CHECK(r.event_state.y == doctest::Approx(p.gamma).epsilon(1e-10));
    CHECK(std::abs(r.event_state.x - solve_x_tau1(p)) <= 1e-6);
    CHECK(r.trajectory.terminated_by == Termination::event_hit);
    CHECK(r.trajectory.back().t == r.event_time);

    CHECK_THROWS_AS(simulate_until(p, laissez_faire(p, 400.0), EpidemicState::initial(p), cfg, EventSpec::y_reaches(0.5)),
                    InfeasibleQuery);
}

TEST_CASE("input validation") {
    const ModelParams p = figure_params();
    const ControlPolicy short_policy({Segment{0.0, 5.0, Constant{1.0}}});
    CHECK_THROWS_AS(simulate(p, short_policy, EpidemicState::initial(p), SimConfig{}), ConfigError);
    CHECK_THROWS_AS(ControlPolicy({Segment{0.0, 1.0, Constant{1.0}}, Segment{2.0, 3.0, Constant{1.0}}}), ConfigError);
    CHECK_THROWS_AS(ControlPolicy({Segment{0.0, 1.0, Constant{-0.1}}}), ConfigError);
    CHECK_THROWS_AS((ModelParams{0.3, 1.0, 1.5, 0.01}.validate()), ConfigError);
    SimConfig bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("policy values are left-continuous") {
    const ControlPolicy pol({Segment{0.0, 2.0, Constant{1.0}}, Segment{2.0, 4.0, Constant{0.5}}});
    CHECK(pol.rate(0.0) == 1.0);
    CHECK(pol.rate(2.0) == 1.0);
    CHECK(pol.rate(std::nextafter(2.0, 3.0)) == 0.5);
    CHECK(pol.cost_until(4.0, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pol.rate(4.5), ConfigError);
}
