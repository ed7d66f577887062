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

#include "boxfill/optimal.hpp"
#include "boxfill/policies.hpp"
#include "boxfill/sir.hpp"
#include "support.hpp"

using namespace boxfill;
using boxfill::testing::figure_params;

TEST_CASE("flatten-the-curve level puts the peak at gamma") {
    const ModelParams p = figure_params();
    const double delta = flatten_level(p);
    CHECK(delta > p.alpha / p.x0());
    CHECK(delta < p.beta);
    CHECK(peak_infected(p, delta) == doctest::Approx(p.gamma).epsilon(1e-12));
}

TEST_CASE("flatten-the-curve costs more than the optimum") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    const CostReport flat = evaluate_cost(p, flatten_curve(p, 400.0, cfg), cfg);
    const CostReport opt = evaluate_cost(p, build_optimal_policy(p, cfg).first, cfg);
    CHECK(flat.feasible);
    CHECK(opt.feasible);
    CHECK(flat.cost_numeric > opt.cost_numeric);
    CHECK_FALSE(flat.horizon_capped);
    CHECK_FALSE(flat.cost_closed_form.has_value());
    REQUIRE(opt.cost_closed_form.has_value());
    CHECK(opt.cost_numeric == doctest::Approx(*opt.cost_closed_form).epsilon(1e-6));
}

TEST_CASE("releasing at the flattened peak overshoots") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    const CostReport early = evaluate_cost(p, flatten_curve(p, 400.0, cfg, FlattenRelease::at_peak), cfg);
    CHECK_FALSE(early.feasible);
    CHECK(early.max_y > p.gamma + 0.01);
}

TEST_CASE("laissez-faire is free but infeasible at the figure parameters") {
    const ModelParams p = figure_params();
    const SimConfig cfg;
    const CostReport lf = evaluate_cost(p, laissez_faire(p, 400.0), cfg);
    CHECK(lf.cost_numeric == 0.0);
    REQUIRE(lf.cost_closed_form.has_value());
    CHECK(*lf.cost_closed_form == 0.0);
    CHECK_FALSE(lf.feasible);
    CHECK(peak_infected(p, p.beta) > p.gamma);
    CHECK(lf.x_infinity_estimate == doctest::Approx(limit_susceptible(p, p.beta, EpidemicState::initial(p))).epsilon(1e-6));
}

TEST_CASE("constant shutdown") {
    const ModelParams p = figure_params();
    const ControlPolicy c = constant_shutdown(p, 0.4, 2.0, 6.0, 400.0);
    REQUIRE(c.segments().size() == 3);
    CHECK(c.rate(1.0) == p.beta);
    CHECK(c.rate(3.0) == 0.4);
    CHECK(c.rate(7.0) == p.beta);
    const CostReport r = evaluate_cost(p, c, SimConfig{});
    CHECK(r.cost_numeric == doctest::Approx(0.6 * 4.0).epsilon(1e-10));
    CHECK_THROWS_AS(constant_shutdown(p, 0.4, 6.0, 2.0, 400.0), ConfigError);
    CHECK_THROWS_AS(constant_shutdown(p, -0.1, 2.0, 6.0, 400.0), ConfigError);
}

TEST_CASE("horizon cap on a suppressed tail is flagged") {
    const ModelParams p = figure_params();
    SimConfig cfg;
    cfg.t_max = 20.0;
    const ControlPolicy c({Segment{0.0, 20.0, Constant{0.2}}});
    const CostReport r = evaluate_cost(p, c, cfg);
    CHECK(r.horizon_capped);
}

TEST_CASE("flattening is undefined when gamma is never reached") {
    ModelParams p = figure_params();
    p.gamma = 0.9;
    CHECK_THROWS_AS(flatten_level(p), NumericError);
}
