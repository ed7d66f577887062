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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "boxfill/cli.hpp"
#include "boxfill/optimal.hpp"
#include "boxfill/policies.hpp"
#include "boxfill/sir.hpp"
#include "boxfill/verify.hpp"
#include "config.hpp"
#include "output.hpp"

namespace boxfill::cli {

namespace {

using nlohmann::ordered_json;

struct Overrides {
    std::string config;
    std::string policy;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
};

RunConfig make_config(const Overrides& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.policy.empty()) cfg.policy = o.policy;
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.seed) cfg.seed = *o.seed;
    if (o.n) cfg.n = *o.n;
    cfg.validate();
    return cfg;
}

Trajectory run_policy(const RunConfig& cfg, const ControlPolicy& policy) {
    SimConfig sim = cfg.sim;
    sim.t_max = std::min(sim.t_max, policy.horizon());
    return simulate(cfg.params, policy, EpidemicState::initial(cfg.params), sim);
}

ordered_json summary_json(const RunConfig& cfg, const CostReport& rep) {
    const bool lf = laissez_faire_is_optimal(cfg.params);
    OptimalSolution sol;
    if (!lf) sol = build_optimal_policy(cfg.params, cfg.sim, cfg.effective_horizon()).second;
    ordered_json j;
    j["tau1"] = lf ? ordered_json(nullptr) : number(sol.tau1);
    j["tau2"] = lf ? ordered_json(nullptr) : number(sol.tau2);
    j["x_tau1"] = lf ? ordered_json(nullptr) : number(sol.x_tau1);
    j["jump_level"] = lf ? ordered_json(nullptr) : number(sol.jump_level);
    j["cost_closed_form"] = rep.cost_closed_form ? number(*rep.cost_closed_form) : ordered_json(nullptr);
    j["cost_numeric"] = number(rep.cost_numeric);
    j["regime"] = to_string(lf ? Regime::laissez_faire_optimal : Regime::constrained);
    j["x_infinity"] = number(rep.x_infinity_estimate);
    return j;
}

ordered_json report_json(const CostReport& r) {
    ordered_json j;
    j["policy"] = r.policy_name;
    j["cost_numeric"] = number(r.cost_numeric);
    j["cost_closed_form"] = r.cost_closed_form ? number(*r.cost_closed_form) : ordered_json(nullptr);
    j["feasible"] = r.feasible;
    j["max_y"] = number(r.max_y);
    j["x_infinity"] = number(r.x_infinity_estimate);
    j["horizon_capped"] = r.horizon_capped;
    return j;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const ControlPolicy policy = resolve_policy(cfg, cfg.policy);
    const Trajectory tr = run_policy(cfg, policy);
    const CostReport rep = summarize(cfg.params, policy, tr);
    write_file(cfg.output_dir, "trajectory.csv", trajectory_csv(tr));
    write_file(cfg.output_dir, "summary.json", dump(summary_json(cfg, rep)));
    out << "simulate: policy " << policy.name() << ", cost " << fmt(rep.cost_numeric) << ", max_y "
        << fmt(rep.max_y) << (rep.feasible ? "" : " (infeasible)") << "\n";
    return ok;
}

int cmd_optimal(const RunConfig& cfg, std::ostream& out) {
    const ControlPolicy policy = build_optimal_policy(cfg.params, cfg.sim, cfg.effective_horizon()).first;
    const Trajectory tr = run_policy(cfg, policy);
    const CostReport rep = summarize(cfg.params, policy, tr);
    const std::string text = dump(summary_json(cfg, rep));
    write_file(cfg.output_dir, "summary.json", text);
    write_file(cfg.output_dir, "trajectory.csv", trajectory_csv(tr));
    out << text;
    return ok;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    const double horizon = cfg.effective_horizon();
    const bool lf = laissez_faire_is_optimal(cfg.params);
    std::vector<ControlPolicy> policies{build_optimal_policy(cfg.params, cfg.sim, horizon).first};
    // Flattening needs a delta whose peak is exactly gamma; none exists when
    // the unregulated peak already stays below gamma.
    if (!lf) policies.push_back(flatten_curve(cfg.params, horizon, cfg.sim, cfg.release));
    policies.push_back(laissez_faire(cfg.params, horizon));

    std::string csv = "policy,cost_numeric,cost_closed_form,feasible,max_y,x_infinity,horizon_capped\n";
    std::string fig = "policy,t,y,b\n";
    ordered_json j;
    j["regime"] = to_string(lf ? Regime::laissez_faire_optimal : Regime::constrained);
    j["policies"] = ordered_json::array();
    for (const ControlPolicy& p : policies) {
        const Trajectory tr = run_policy(cfg, p);
        const CostReport r = summarize(cfg.params, p, tr);
        j["policies"].push_back(report_json(r));
        csv += r.policy_name + ',' + fmt(r.cost_numeric) + ',' + (r.cost_closed_form ? fmt(*r.cost_closed_form) : "") +
               ',' + (r.feasible ? "true" : "false") + ',' + fmt(r.max_y) + ',' + fmt(r.x_infinity_estimate) + ',' +
               (r.horizon_capped ? "true" : "false") + '\n';
        if (p.name() != "laissez_faire") {
            for (const Sample& s : tr.samples) fig += p.name() + ',' + fmt(s.t) + ',' + fmt(s.y) + ',' + fmt(s.b) + '\n';
        }
        out << "compare: " << r.policy_name << " cost " << fmt(r.cost_numeric) << (r.feasible ? "" : " (infeasible)")
            << "\n";
    }
    write_file(cfg.output_dir, "compare.csv", csv);
    write_file(cfg.output_dir, "compare.json", dump(j));
    write_file(cfg.output_dir, "figure2.csv", fig);
    return ok;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    SearchOptions opts;
    opts.strategy = cfg.strategy;
    opts.feasibility = cfg.feasibility;
    opts.restarts = cfg.restarts;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    opts.feasibility_tol = cfg.feasibility_tol;
    const double horizon = cfg.search_horizon > 0.0 ? cfg.search_horizon : default_search_horizon(cfg.params, cfg.sim);
    const SearchReport rep = brute_force_search(cfg.params, cfg.n, horizon, cfg.sim, opts);

    ordered_json pol;
    pol["t_grid"] = rep.best_policy.t_grid;
    pol["levels"] = rep.best_policy.levels;
    ordered_json j;
    j["strategy"] = rep.strategy;
    j["feasibility_mode"] = rep.feasibility_mode;
    j["n"] = rep.n;
    j["horizon"] = number(rep.horizon);
    j["seed"] = cfg.seed;
    j["best_cost"] = number(rep.best_cost);
    j["best_policy"] = pol;
    j["best_max_y"] = number(rep.best_max_y);
    j["closed_form_cost"] = number(rep.closed_form_cost);
    j["gap"] = number(rep.gap);
    j["evaluations"] = rep.evaluations;
    j["feasibility_violations_of_best"] = number(rep.feasibility_violations_of_best);
    j["discretization_allowance"] = number(rep.discretization_allowance);
    j["projection_cost"] = number(rep.projection_cost);
    j["projection_max_y"] = number(rep.projection_max_y);
    j["passed"] = rep.passed;
    write_file(cfg.output_dir, "verify.json", dump(j));
    out << "verify: best " << fmt(rep.best_cost) << ", closed form " << fmt(rep.closed_form_cost) << ", allowance "
        << fmt(rep.discretization_allowance) << " -> " << (rep.passed ? "pass" : "FAIL") << "\n";
    return rep.passed ? ok : verification_gap;
}

void append_orbit(std::string& csv, const std::string& series, const Trajectory& tr) {
    double last = 2.0;
    for (const Sample& s : tr.samples) {
        if (!(s.x < last)) continue; // zero-transmission stretches and stalls
        csv += series + ',' + fmt(s.x) + ',' + fmt(s.y) + '\n';
        last = s.x;
    }
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
    const ControlPolicy policy = resolve_policy(cfg, cfg.policy);
    const ControlPolicy lf = laissez_faire(cfg.params, cfg.effective_horizon());
    std::string csv = "series,x,y\n";
    append_orbit(csv, policy.name(), run_policy(cfg, policy));
    if (policy.name() != "laissez_faire") append_orbit(csv, "laissez_faire", run_policy(cfg, lf));
    write_file(cfg.output_dir, "orbit.csv", csv);
    out << "orbit: wrote " << policy.name() << " and laissez_faire series\n";
    return ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"boxfill: optimal ICU-constrained suppression for the SIR model"};
    app.require_subcommand(1);
    Overrides o;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    app.add_option("--config", o.config, "INI file with [params], [sim], [run]");
    app.add_option("--policy", o.policy, "laissez_faire | flatten_curve | optimal | constant:d:t1:t2 | file:path");
    app.add_option("--out", o.out, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "search seed");
    auto* n_opt = app.add_option("--n", n, "search intervals");

    using Command = int (*)(const RunConfig&, std::ostream&);
    const std::pair<const char*, Command> commands[] = {
        {"simulate", cmd_simulate}, {"optimal", cmd_optimal}, {"compare", cmd_compare},
        {"verify", cmd_verify},     {"orbit", cmd_orbit},
    };
    const char* help[] = {
        "simulate a policy; writes trajectory.csv and summary.json",
        "closed-form optimal policy; writes summary.json and trajectory.csv",
        "optimal vs flatten-the-curve vs laissez-faire; writes compare.csv/json and figure2.csv",
        "brute-force optimality check; writes verify.json",
        "phase-plane orbits; writes orbit.csv",
    };
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) subs.push_back(app.add_subcommand(commands[i].first, help[i])->fallthrough());

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }
    if (*seed_opt) o.seed = seed;
    if (*n_opt) o.n = n;

    try {
        const RunConfig cfg = make_config(o);
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (*subs[i]) return commands[i].second(cfg, out);
        }
        return config_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return numeric_failure;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return numeric_failure;
    }
}

} // namespace boxfill::cli
