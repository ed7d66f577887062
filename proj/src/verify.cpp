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

#include "boxfill/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "boxfill/optimal.hpp"
#include "boxfill/sir.hpp"

namespace boxfill {

namespace {

constexpr std::size_t max_intervals = 32;
constexpr double inf = std::numeric_limits<double>::infinity();

// Simulation settings for candidate screening: no samples, hard stop at T.
SimConfig screening_config(const SimConfig& cfg, double t_end) {
    SimConfig c = cfg;
    c.t_max = t_end;
    c.output_dt = std::max(cfg.output_dt, t_end);
    return c;
}

struct Interval {
    double max_y = 0.0;
    EpidemicState end;
};

Interval run_interval(const ModelParams& params,
                      const SimConfig& cfg,
                      const EpidemicState& from,
                      double t0,
                      double t1,
                      double level) {
    std::vector<Segment> segs;
    if (t0 > 0.0) segs.push_back(Segment{0.0, t0, Constant{params.beta}});
    segs.push_back(Segment{t0, t1, Constant{level}});
    const ControlPolicy policy(std::move(segs));
    SimOptions opts;
    opts.record_samples = false;
    opts.t_start = t0;
    const Trajectory tr = simulate(params, policy, from, screening_config(cfg, t1), opts);
    return Interval{tr.max_y, EpidemicState{tr.back().x, tr.back().y}};
}

struct Candidate {
    std::vector<double> levels;
    Evaluation eval;
};

// Lower cost first, then the lexicographically smaller level vector.
bool better(const Candidate& a, const Candidate& b) {
    if (a.eval.cost != b.eval.cost) return a.eval.cost < b.eval.cost;
    return a.levels < b.levels;
}

class Searcher {
public:
    Searcher(const ModelParams& params, std::vector<double> grid, const SimConfig& cfg, const SearchOptions& opts)
        : params_(params), grid_(std::move(grid)), cfg_(cfg), opts_(opts) {}

    Evaluation evaluate(const std::vector<double>& levels) {
        ++evaluations_;
        const Evaluation e = evaluate_discrete(params_, DiscretePolicy{grid_, levels}, cfg_, opts_.feasibility_tol);
        if (e.feasible) {
            Candidate c{levels, e};
            if (!best_ || better(c, *best_)) best_ = std::move(c);
        }
        return e;
    }

    double objective(const Evaluation& e) const {
        if (e.feasible) return e.cost;
        if (opts_.feasibility == FeasibilityMode::reject) return inf;
        const double excess = e.max_y - params_.gamma - opts_.feasibility_tol;
        return e.cost + opts_.penalty_weight * excess * excess;
    }

    void descend(std::vector<double> levels) {
        double current = objective(evaluate(levels));
        for (double step = params_.beta * opts_.initial_step_fraction; step >= opts_.min_step; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t i = 0; i < levels.size(); ++i) {
                    for (const double dir : {1.0, -1.0}) {
                        const double cand = std::clamp(levels[i] + dir * step, 0.0, params_.beta);
                        if (cand == levels[i]) continue;
                        std::vector<double> trial = levels;
                        trial[i] = cand;
                        const double obj = objective(evaluate(trial));
                        if (obj < current - 1e-12) {
                            levels = std::move(trial);
                            current = obj;
                            improved = true;
                            break;
                        }
                    }
                }
            }
        }
    }

    void grid_scan() {
        const std::size_t m = opts_.grid_levels;
        const std::size_t n = grid_.size() - 1;
        if (m < 2) throw ConfigError("grid strategy needs at least 2 levels");
        double total = 1.0;
        for (std::size_t i = 0; i < n; ++i) total *= static_cast<double>(m);
        if (total > static_cast<double>(opts_.max_grid_candidates)) {
            throw ConfigError("grid strategy: " + std::to_string(m) + "^" + std::to_string(n) +
                              " candidates exceed the budget of " + std::to_string(opts_.max_grid_candidates));
        }
        std::vector<std::size_t> idx(n, 0);
        std::vector<double> levels(n);
        while (true) {
            for (std::size_t i = 0; i < n; ++i) {
                levels[i] = params_.beta * static_cast<double>(idx[i]) / static_cast<double>(m - 1);
            }
            evaluate(levels);
            std::size_t k = 0;
            while (k < n && ++idx[k] == m) idx[k++] = 0;
            if (k == n) break;
        }
    }

    const std::optional<Candidate>& best() const { return best_; }
    std::size_t evaluations() const { return evaluations_; }

private:
    ModelParams params_;
    std::vector<double> grid_;
    SimConfig cfg_;
    SearchOptions opts_;
    std::optional<Candidate> best_;
    std::size_t evaluations_ = 0;
};

std::vector<double> random_levels(const ModelParams& params, std::size_t n, std::uint64_t seed, std::size_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, params.beta);
    std::vector<double> levels(n);
    for (double& l : levels) l = u(rng);
    return levels;
}

double closed_form_or_zero(const ModelParams& params) {
    return laissez_faire_is_optimal(params) ? 0.0 : optimal_cost_closed_form(params);
}

} // namespace

void DiscretePolicy::validate(double beta) const {
    if (levels.empty() || t_grid.size() != levels.size() + 1) {
        throw ConfigError("discrete policy needs N >= 1 levels and N + 1 breakpoints");
    }
    if (t_grid.front() != 0.0) throw ConfigError("discrete policy must start at t = 0");
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        if (!(t_grid[i + 1] > t_grid[i])) throw ConfigError("discrete policy breakpoints must increase");
    }
    for (double l : levels) {
        if (!(l >= 0.0 && l <= beta)) throw ConfigError("discrete policy level outside [0, beta]");
    }
}

double DiscretePolicy::cost(double beta) const {
    double c = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) c += (beta - levels[i]) * (t_grid[i + 1] - t_grid[i]);
    return c;
}

ControlPolicy DiscretePolicy::to_control(double beta, double tail_end) const {
    std::vector<Segment> segs;
    segs.reserve(levels.size() + 1);
    for (std::size_t i = 0; i < levels.size(); ++i) segs.push_back(Segment{t_grid[i], t_grid[i + 1], Constant{levels[i]}});
    if (tail_end > horizon()) segs.push_back(Segment{horizon(), tail_end, Constant{beta}});
    return ControlPolicy(std::move(segs), "discrete");
}

double default_search_horizon(const ModelParams& params, const SimConfig& cfg) {
    if (laissez_faire_is_optimal(params)) return 50.0;
    return 1.5 * build_optimal_policy(params, cfg).second.tau2;
}

std::vector<double> search_grid(const ModelParams& params, std::size_t n, double horizon, const SimConfig& cfg) {
    if (n == 0 || n > max_intervals) throw ConfigError("N must be in [1, 32], got " + std::to_string(n));
    if (!(horizon > 0.0)) throw ConfigError("search horizon must be positive");
    std::vector<double> g;
    const auto uniform = [&](double a, double b, std::size_t cells) {
        for (std::size_t i = 0; i < cells; ++i) {
            g.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(cells));
        }
    };
    if (n >= 2 && !laissez_faire_is_optimal(params)) {
        const OptimalSolution sol = build_optimal_policy(params, cfg).second;
        if (!(horizon > sol.tau2)) throw ConfigError("search horizon must extend past the release time");
        g.push_back(0.0);
        if (n == 2) {
            g.push_back(sol.tau1);
        } else {
            uniform(sol.tau1, sol.tau2, n - 2);
            g.push_back(sol.tau2);
        }
        g.push_back(horizon);
        return g;
    }
    uniform(0.0, horizon, n);
    g.push_back(horizon);
    return g;
}

Evaluation evaluate_discrete(const ModelParams& params,
                             const DiscretePolicy& policy,
                             const SimConfig& cfg,
                             double tol) {
    policy.validate(params.beta);
    const double t_end = policy.horizon();
    SimOptions opts;
    opts.record_samples = false;
    const Trajectory tr = simulate(params, policy.to_control(params.beta, t_end), EpidemicState::initial(params),
                                   screening_config(cfg, t_end), opts);
    Evaluation e;
    e.cost = policy.cost(params.beta);
    e.max_y = tr.max_y;
    if (tr.terminated_by == Termination::horizon_cap) {
        e.max_y = std::max(e.max_y, peak_from(params, params.beta, EpidemicState{tr.back().x, tr.back().y}));
    }
    e.feasible = e.max_y <= params.gamma + tol;
    return e;
}

DiscretePolicy clip_to_feasible(const ModelParams& params,
                                DiscretePolicy policy,
                                const SimConfig& cfg,
                                double tol) {
    policy.validate(params.beta);
    const double limit = params.gamma + 0.5 * tol;
    EpidemicState state = EpidemicState::initial(params);
    const std::size_t n = policy.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double t0 = policy.t_grid[i];
        const double t1 = policy.t_grid[i + 1];
        const bool last = i + 1 == n;
        const auto ok = [&](const Interval& r) {
            if (r.max_y > limit) return false;
            return !last || peak_from(params, params.beta, r.end) <= limit;
        };
        Interval run = run_interval(params, cfg, state, t0, t1, policy.levels[i]);
        if (!ok(run)) {
            // Within an interval max_y grows with the level, so the feasible
            // levels form [0, l]. On the last interval a low level also leaves
            // too many susceptibles for the tail and the set is a band
            // [l0, l]; scan down for a point inside it before bisecting.
            const double cap = policy.levels[i];
            double lo = 0.0;
            double hi = cap;
            Interval lo_run = run_interval(params, cfg, state, t0, t1, lo);
            if (!ok(lo_run)) {
                constexpr int scan = 64;
                bool found = false;
                for (int k = scan - 1; k >= 1 && !found; --k) {
                    const double l = cap * k / scan;
                    Interval r = run_interval(params, cfg, state, t0, t1, l);
                    if (ok(r)) {
                        lo = l;
                        hi = cap * (k + 1) / scan;
                        lo_run = r;
                        found = true;
                    }
                }
            }
            for (int it = 0; it < 48 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                Interval r = run_interval(params, cfg, state, t0, t1, mid);
                if (ok(r)) {
                    lo = mid;
                    lo_run = r;
                } else {
                    hi = mid;
                }
            }
            policy.levels[i] = lo;
            run = lo_run;
        }
        state = run.end;
    }
    return policy;
}

DiscretePolicy project_optimal(const ModelParams& params, std::size_t n, double horizon, const SimConfig& cfg) {
    DiscretePolicy p;
    p.t_grid = search_grid(params, n, horizon, cfg);
    p.levels.assign(n, params.beta);
    if (laissez_faire_is_optimal(params)) return p;
    const ControlPolicy b_star = build_optimal_policy(params, cfg, horizon).first;
    for (std::size_t i = 0; i < n; ++i) {
        const double mid = 0.5 * (p.t_grid[i] + p.t_grid[i + 1]);
        p.levels[i] = std::clamp(b_star.rate(mid), 0.0, params.beta);
    }
    return p;
}

const char* to_string(Strategy s) {
    switch (s) {
    case Strategy::grid: return "grid";
    case Strategy::coordinate_descent: return "coordinate_descent";
    case Strategy::random_restart: return "random_restart";
    }
    return "?";
}

const char* to_string(FeasibilityMode m) { return m == FeasibilityMode::reject ? "reject" : "penalty"; }

Strategy parse_strategy(const std::string& name) {
    for (Strategy s : {Strategy::grid, Strategy::coordinate_descent, Strategy::random_restart}) {
        if (name == to_string(s)) return s;
    }
    throw ConfigError("unknown search strategy '" + name + "'");
}

FeasibilityMode parse_feasibility_mode(const std::string& name) {
    if (name == "reject") return FeasibilityMode::reject;
    if (name == "penalty") return FeasibilityMode::penalty;
    throw ConfigError("unknown feasibility mode '" + name + "'");
}

SearchReport brute_force_search(const ModelParams& params,
                                std::size_t n,
                                double horizon,
                                const SimConfig& cfg,
                                const SearchOptions& opts) {
    params.validate();
    cfg.validate();
    const std::vector<double> grid = search_grid(params, n, horizon, cfg);

    SearchReport rep;
    rep.strategy = to_string(opts.strategy);
    rep.feasibility_mode = to_string(opts.feasibility);
    rep.n = n;
    rep.horizon = horizon;
    rep.closed_form_cost = closed_form_or_zero(params);

    const DiscretePolicy proj = project_optimal(params, n, horizon, cfg);
    const Evaluation proj_eval = evaluate_discrete(params, proj, cfg, opts.feasibility_tol);
    rep.projection_cost = proj_eval.cost;
    rep.projection_max_y = proj_eval.max_y;
    rep.discretization_allowance = std::abs(proj_eval.cost - rep.closed_form_cost);

    std::optional<Candidate> best;
    const auto merge = [&](const Searcher& s) {
        rep.evaluations += s.evaluations();
        if (s.best() && (!best || better(*s.best(), *best))) best = s.best();
    };

    switch (opts.strategy) {
    case Strategy::grid: {
        Searcher s(params, grid, cfg, opts);
        s.grid_scan();
        merge(s);
        break;
    }
    case Strategy::coordinate_descent: {
        Searcher s(params, grid, cfg, opts);
        DiscretePolicy start{grid, opts.start_levels.value_or(std::vector<double>(n, params.beta))};
        start = clip_to_feasible(params, start, cfg, opts.feasibility_tol);
        s.descend(start.levels);
        merge(s);
        break;
    }
    case Strategy::random_restart: {
        const std::size_t k = opts.restarts;
        std::vector<Searcher> searchers(k, Searcher(params, grid, cfg, opts));
        const auto work = [&](std::size_t r) {
            DiscretePolicy start{grid, random_levels(params, n, opts.seed, r)};
            start = clip_to_feasible(params, start, cfg, opts.feasibility_tol);
            searchers[r].descend(start.levels);
        };
        const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(k)));
        if (threads == 1) {
            for (std::size_t r = 0; r < k; ++r) work(r);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < threads; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t r = w; r < k; r += threads) work(r);
                });
            }
            for (auto& t : pool) t.join();
        }
        for (const Searcher& s : searchers) merge(s);
        break;
    }
    }

    if (!best) throw ConfigError("search found no feasible candidate; check N and the horizon");
    rep.best_cost = best->eval.cost;
    rep.best_max_y = best->eval.max_y;
    rep.best_policy = DiscretePolicy{grid, best->levels};
    rep.gap = rep.best_cost - rep.closed_form_cost;
    rep.feasibility_violations_of_best = std::max(0.0, best->eval.max_y - params.gamma);
    rep.passed = rep.best_cost >= rep.closed_form_cost - (rep.discretization_allowance + 1e-4);
    return rep;
}

LocalProbe local_optimality_probe(const ModelParams& params,
                                  const DiscretePolicy& policy,
                                  const SimConfig& cfg,
                                  double tol,
                                  const std::vector<double>& steps) {
    LocalProbe out;
    const Evaluation base = evaluate_discrete(params, policy, cfg, tol);
    if (!base.feasible) throw NumericError("local probe: base policy is infeasible");
    out.base_cost = base.cost;
    out.best_improvement = -inf;
    ++out.evaluations;
    for (const double step : steps) {
        for (std::size_t i = 0; i < policy.size(); ++i) {
            for (const double dir : {1.0, -1.0}) {
                DiscretePolicy trial = policy;
                trial.levels[i] = std::clamp(policy.levels[i] + dir * step, 0.0, params.beta);
                if (trial.levels[i] == policy.levels[i]) continue;
                const Evaluation e = evaluate_discrete(params, trial, cfg, tol);
                ++out.evaluations;
                if (e.feasible) out.best_improvement = std::max(out.best_improvement, base.cost - e.cost);
            }
        }
    }
    return out;
}

UniquenessReport uniqueness_probe(const ModelParams& params,
                                  std::size_t n,
                                  double horizon,
                                  const SimConfig& cfg,
                                  double budget) {
    if (laissez_faire_is_optimal(params)) throw NumericError("uniqueness probe needs the constrained regime");
    if (n < 3) throw ConfigError("uniqueness probe needs N >= 3");
    constexpr double tol = 1e-7;
    const DiscretePolicy base = clip_to_feasible(params, project_optimal(params, n, horizon, cfg), cfg, tol);
    const Evaluation base_eval = evaluate_discrete(params, base, cfg, tol);
    if (!base_eval.feasible) throw NumericError("uniqueness probe: clipped projection is infeasible");

    UniquenessReport rep;
    rep.base_cost = base_eval.cost;
    const auto probe = [&](const std::string& kind, std::size_t i, double delta) {
        DiscretePolicy p = base;
        p.levels[i] = std::clamp(p.levels[i] + delta, 0.0, params.beta);
        // A lowered level changes the state downstream; clipping restores
        // feasibility there without undoing the perturbation itself.
        if (delta < 0.0) p = clip_to_feasible(params, p, cfg, tol);
        const Evaluation e = evaluate_discrete(params, p, cfg, tol);
        Perturbation r{kind, i, p.levels[i] - base.levels[i], e.cost - base_eval.cost, e.max_y, e.feasible, false};
        if (kind == "raise_on_ramp") {
            r.as_expected = !e.feasible;
        } else if (kind == "raise_after_tau2") {
            r.as_expected = e.feasible && std::abs(r.cost_delta) <= 1e-8;
        } else {
            r.as_expected = e.feasible && r.cost_delta > 0.0;
        }
        rep.perturbations.push_back(r);
    };
    probe("lower_before_tau1", 0, -budget);
    const std::size_t ramp_mid = 1 + (n - 2) / 2;
    for (std::size_t i : {std::size_t{1}, ramp_mid, n - 2}) {
        probe("raise_on_ramp", i, budget);
        probe("lower_on_ramp", i, -budget);
    }
    probe("raise_after_tau2", n - 1, budget);
    rep.consistent = std::all_of(rep.perturbations.begin(), rep.perturbations.end(),
                                 [](const Perturbation& p) { return p.as_expected; });
    return rep;
}

} // namespace boxfill
