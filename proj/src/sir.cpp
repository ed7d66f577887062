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

#include "boxfill/sir.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "boxfill/roots.hpp"

namespace boxfill {

namespace {

// State layout: x, y, cumulative cost.
using Vec = std::array<double, 3>;

// Dormand-Prince 5(4) tableau with Hairer's continuous extension.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
} // namespace dp

struct Rhs {
    const Segment* seg;
    double alpha;
    double beta;

    Vec operator()(double t, const Vec& s) const {
        const double b = seg->rate(t);
        const double inf = b * s[0] * s[1];
        return {-inf, inf - alpha * s[1], std::max(beta - b, 0.0)};
    }
};

/// One accepted step together with its dense-output polynomial.
struct Step {
    double t0 = 0.0;
    double h = 0.0;
    Vec y0{}, y1{};
    std::array<Vec, 5> rc{};

    double t1() const { return t0 + h; }

    Vec at(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        Vec out{};
        for (int i = 0; i < 3; ++i) {
            out[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
        }
        return out;
    }
};

struct StepAttempt {
    Vec y1{};
    Vec k7{};
    double err = 0.0;
    std::array<Vec, 7> k{};
};

StepAttempt try_step(const Rhs& f, double t, const Vec& y, const Vec& k1, double h, const SimConfig& cfg) {
    using namespace dp;
    StepAttempt a;
    auto& k = a.k;
    k[0] = k1;
    Vec tmp{};
    auto stage = [&](std::initializer_list<std::pair<int, double>> terms) {
        for (int i = 0; i < 3; ++i) {
            double acc = 0.0;
            for (const auto& [j, c] : terms) acc += c * k[j][i];
            tmp[i] = y[i] + h * acc;
        }
        return tmp;
    };
    k[1] = f(t + c2 * h, stage({{0, a21}}));
    k[2] = f(t + c3 * h, stage({{0, a31}, {1, a32}}));
    k[3] = f(t + c4 * h, stage({{0, a41}, {1, a42}, {2, a43}}));
    k[4] = f(t + c5 * h, stage({{0, a51}, {1, a52}, {2, a53}, {3, a54}}));
    k[5] = f(t + h, stage({{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}}));
    a.y1 = stage({{0, a71}, {2, a73}, {3, a74}, {4, a75}, {5, a76}});
    k[6] = f(t + h, a.y1);
    a.k7 = k[6];

    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double e =
            h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
        const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(a.y1[i]));
        sum += (e / sc) * (e / sc);
    }
    a.err = std::sqrt(sum / 3.0);
    return a;
}

Step make_step(double t, double h, const Vec& y0, const StepAttempt& a) {
    using namespace dp;
    Step s;
    s.t0 = t;
    s.h = h;
    s.y0 = y0;
    s.y1 = a.y1;
    const auto& k = a.k;
    for (int i = 0; i < 3; ++i) {
        const double ydiff = a.y1[i] - y0[i];
        const double bspl = h * k[0][i] - ydiff;
        s.rc[0][i] = y0[i];
        s.rc[1][i] = ydiff;
        s.rc[2][i] = bspl;
        s.rc[3][i] = ydiff - h * k[6][i] - bspl;
        s.rc[4][i] =
            h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
    }
    return s;
}

bool finite(const Vec& v) { return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]); }

class Integrator {
public:
    Integrator(const ModelParams& p, const ControlPolicy& pol, const SimConfig& cfg, const SimOptions& opts)
        : p_(p), pol_(pol), cfg_(cfg), opts_(opts) {}

    Trajectory run(const EpidemicState& init) {
        double t = opts_.t_start;
        Vec y{init.x, init.y, 0.0};
        traj_.max_y = init.y;
        traj_.t_of_max_y = t;

        std::size_t k = first_segment(t);
        emit(t, y, pol_.segments()[k].rate(t), true);

        if (opts_.event) {
            g_prev_ = g(t, y);
            if (g_prev_ == 0.0) {
                finish_event(t, y, k);
                return std::move(traj_);
            }
        }

        double h = std::min(cfg_.max_step, 1e-2);
        while (true) {
            const Segment& seg = pol_.segments()[k];
            const double seg_end = std::min(seg.t_end, cfg_.t_max);
            const Rhs f{&seg, p_.alpha, p_.beta};
            Vec k1 = f(t, y);
            while (t < seg_end) {
                double h_try = std::min(h, cfg_.max_step);
                bool to_end = false;
                // Land exactly on the breakpoint instead of leaving a sliver.
                if (t + h_try >= seg_end - 1e-12 * std::max(1.0, std::abs(seg_end))) {
                    h_try = seg_end - t;
                    to_end = true;
                }
                StepAttempt a = try_step(f, t, y, k1, h_try, cfg_);
                if (!finite(a.y1) || !(a.err <= 1.0)) {
                    const double fac = std::isfinite(a.err) ? std::max(0.2, 0.9 * std::pow(a.err, -0.2)) : 0.2;
                    h = h_try * fac;
                    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
                        throw NumericError("non-finite state or step size underflow at t = " + std::to_string(t));
                    }
                    continue;
                }
                const double t_new = to_end ? seg_end : t + h_try;
                const Step step = make_step(t, t_new - t, y, a);

                if (opts_.event) {
                    if (auto te = locate_event(step)) {
                        track_max(step, *te);
                        emit_grid(step, seg, *te);
                        const Vec ye = advance_to(f, step, *te);
                        finish_event(*te, ye, k);
                        return std::move(traj_);
                    }
                }
                track_max(step, t_new);
                emit_grid(step, seg, t_new);
                t = t_new;
                y = step.y1;
                k1 = a.k7;

                const double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(a.err, 1e-10), -0.2)));
                // A step shortened to hit a breakpoint says nothing about the next one.
                if (!to_end || fac < 1.0) h = h_try * fac;

                if (y[1] < cfg_.y_stop) {
                    emit(t, y, seg.rate(t), true);
                    traj_.terminated_by = Termination::y_below_stop;
                    return std::move(traj_);
                }
                if (opts_.stop_rule && opts_.stop_rule(t, EpidemicState{y[0], y[1]})) {
                    emit(t, y, seg.rate(t), true);
                    traj_.terminated_by = Termination::stop_rule;
                    return std::move(traj_);
                }
            }
            // Breakpoint (or horizon) reached.
            emit(t, y, seg.rate(t), true);
            if (t >= cfg_.t_max) {
                traj_.terminated_by = Termination::horizon_cap;
                return std::move(traj_);
            }
            ++k;
            if (k >= pol_.segments().size()) {
                throw ConfigError("policy gap: segments end at t = " + std::to_string(seg.t_end) +
                                  " before the run terminated");
            }
        }
    }

private:
    std::size_t first_segment(double t) const {
        const auto& segs = pol_.segments();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (t < segs[i].t_end || (t == 0.0 && i == 0)) {
                if (t >= segs[i].t_start) return i;
            }
        }
        throw ConfigError("policy does not cover start time " + std::to_string(t));
    }

    double g(double t, const Vec& s) const { return opts_.event->g(t, EpidemicState{s[0], s[1]}); }

    static bool crossed(double ga, double gb) { return gb == 0.0 || (ga > 0.0) != (gb > 0.0); }

    std::optional<double> locate_event(const Step& step) {
        // Probe interior points so a double crossing inside one step is not missed.
        constexpr int probes = 4;
        double ta = step.t0;
        double ga = g_prev_;
        for (int i = 1; i <= probes; ++i) {
            const double tb = (i == probes) ? step.t1() : step.t0 + step.h * i / probes;
            const double gb = (i == probes) ? g(tb, step.y1) : g(tb, step.at(tb));
            if (crossed(ga, gb)) {
                if (gb == 0.0 && i == probes) return tb;
                double lo = ta, hi = tb;
                const double glo = ga;
                while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g(mid, step.at(mid));
                    if (crossed(glo, gm)) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return hi;
            }
            ta = tb;
            ga = gb;
        }
        g_prev_ = ga;
        return std::nullopt;
    }

    // A fresh Runge-Kutta step from the accepted step's start lands on `te`
    // with full step accuracy rather than interpolant accuracy.
    Vec advance_to(const Rhs& f, const Step& step, double te) const {
        const double h = te - step.t0;
        if (h <= 0.0) return step.y0;
        const Vec k1 = f(step.t0, step.y0);
        return try_step(f, step.t0, step.y0, k1, h, cfg_).y1;
    }

    // Maximum of y over [step.t0, t_hi] on the dense output.
    void track_max(const Step& step, double t_hi) {
        constexpr int n = 8;
        const double span = t_hi - step.t0;
        std::array<double, n + 1> ys{};
        ys[0] = step.y0[1];
        ys[n] = (t_hi == step.t1()) ? step.y1[1] : step.at(t_hi)[1];
        for (int i = 1; i < n; ++i) ys[i] = step.at(step.t0 + span * i / n)[1];
        const auto it = std::max_element(ys.begin(), ys.end());
        const int i = static_cast<int>(it - ys.begin());
        double best = *it;
        double tbest = step.t0 + span * i / n;
        if (i > 0 && i < n) {
            // Golden-section refinement of the interior maximum.
            double a = step.t0 + span * (i - 1) / n;
            double b = step.t0 + span * (i + 1) / n;
            const double r = 0.5 * (std::sqrt(5.0) - 1.0);
            double c = b - r * (b - a), d = a + r * (b - a);
            double fc = step.at(c)[1], fd = step.at(d)[1];
            for (int it2 = 0; it2 < 60 && b - a > 1e-13; ++it2) {
                if (fc > fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - r * (b - a);
                    fc = step.at(c)[1];
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + r * (b - a);
                    fd = step.at(d)[1];
                }
            }
            const double tm = 0.5 * (a + b);
            const double ym = step.at(tm)[1];
            if (ym > best) {
                best = ym;
                tbest = tm;
            }
        }
        if (best > traj_.max_y) {
            traj_.max_y = best;
            traj_.t_of_max_y = tbest;
        }
    }

    // Samples at multiples of output_dt in (step.t0, until), excluding `until`.
    void emit_grid(const Step& step, const Segment& seg, double until) {
        if (!opts_.record_samples) return;
        const double dt = cfg_.output_dt;
        double m = std::floor(step.t0 / dt) + 1.0;
        for (;; m += 1.0) {
            const double tg = m * dt;
            if (tg >= until) break;
            if (tg <= step.t0) continue;
            const Vec s = step.at(tg);
            emit(tg, s, seg.rate(tg), false);
        }
    }

    void emit(double t, const Vec& s, double b, bool force) {
        if (!opts_.record_samples && !force) return;
        const Sample sample{t, s[0], s[1], b, s[2]};
        if (!traj_.samples.empty()) {
            const double last = traj_.samples.back().t;
            if (t <= last + 1e-12 * std::max(1.0, std::abs(t))) {
                // A breakpoint replaces a grid sample that coincides with it.
                if (force && t >= last) traj_.samples.back() = sample;
                return;
            }
            if (!opts_.record_samples && traj_.samples.size() >= 2) {
                traj_.samples.back() = sample;
                return;
            }
        }
        traj_.samples.push_back(sample);
    }

    void finish_event(double t, const Vec& y, std::size_t k) {
        const double b = pol_.segments()[k].rate(t);
        emit(t, y, b, true);
        if (y[1] > traj_.max_y) {
            traj_.max_y = y[1];
            traj_.t_of_max_y = t;
        }
        traj_.events.push_back(EventRecord{opts_.event->label, t, y[0], y[1]});
        traj_.terminated_by = Termination::event_hit;
    }

    const ModelParams& p_;
    const ControlPolicy& pol_;
    const SimConfig& cfg_;
    const SimOptions& opts_;
    Trajectory traj_;
    double g_prev_ = 0.0;
};

} // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::y_below_stop: return "y_below_stop";
        case Termination::horizon_cap: return "horizon_cap";
        case Termination::event_hit: return "event_hit";
        case Termination::stop_rule: return "stop_rule";
    }
    return "unknown";
}

EventSpec EventSpec::y_reaches(double level) {
    return EventSpec{"y_reaches", [level](double, const EpidemicState& s) { return s.y - level; }};
}

EventSpec EventSpec::x_reaches(double level) {
    return EventSpec{"x_reaches", [level](double, const EpidemicState& s) { return s.x - level; }};
}

Trajectory simulate(const ModelParams& params,
                    const ControlPolicy& policy,
                    const EpidemicState& init,
                    const SimConfig& cfg,
                    const SimOptions& opts) {
    params.validate();
    cfg.validate();
    if (!(init.x > 0.0 && init.x < 1.0 && init.y > 0.0 && init.y < 1.0 && init.x + init.y <= 1.0 + 1e-12)) {
        throw ConfigError("initial state outside the simplex");
    }
    if (policy.segments().empty()) throw ConfigError("empty policy");
    if (!(opts.t_start < cfg.t_max)) throw ConfigError("start time beyond the horizon cap");
    return Integrator(params, policy, cfg, opts).run(init);
}

EventResult simulate_until(const ModelParams& params,
                           const ControlPolicy& policy,
                           const EpidemicState& init,
                           const SimConfig& cfg,
                           const EventSpec& event) {
    SimOptions opts;
    opts.event = event;
    Trajectory tr = simulate(params, policy, init, cfg, opts);
    if (tr.terminated_by != Termination::event_hit) {
        throw InfeasibleQuery("event '" + event.label + "' never occurs before the run ended (" +
                              to_string(tr.terminated_by) + " at t = " + std::to_string(tr.back().t) + ")");
    }
    const EventRecord& e = tr.events.back();
    EventResult r{std::move(tr), e.t, EpidemicState{e.x, e.y}};
    return r;
}

double orbit_constant(const ModelParams& params, double delta, const EpidemicState& from, double x) {
    if (!(x > 0.0)) throw ConfigError("orbit_constant: x must be positive");
    if (!(delta > 0.0)) throw ConfigError("orbit_constant: delta must be positive");
    return from.y + (params.alpha / delta) * std::log(x / from.x) - x + from.x;
}

double peak_infected(const ModelParams& params, double delta) {
    const double x0 = params.x0();
    if (delta * x0 <= params.alpha) return params.y0();
    const double u = params.alpha / delta;
    return 1.0 + u * std::log(u / x0) - u;
}

double peak_from(const ModelParams& params, double delta, const EpidemicState& from) {
    const double u = params.alpha / delta;
    if (from.x <= u) return from.y;
    return orbit_constant(params, delta, from, u);
}

double limit_susceptible(const ModelParams& params, double delta, const EpidemicState& from) {
    if (!(delta > 0.0)) throw ConfigError("limit_susceptible: delta must be positive");
    if (!(from.x > 0.0) || !(from.y >= 0.0)) throw ConfigError("limit_susceptible: invalid state");
    if (from.y == 0.0) return from.x;
    const double ratio = params.alpha / delta;
    const auto h = [&](double x) { return x - ratio * std::log(x / from.x) - from.x - from.y; };
    // h(lo) = lo > 0 by construction; h(from.x) = -from.y < 0.
    const double lo = std::max(from.x * std::exp(-(from.x + from.y) / ratio), 1e-300);
    return bisect_root(h, lo, from.x, "limit susceptible fixed point");
}

} // namespace boxfill
