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

#include "boxfill/policy.hpp"

#include <algorithm>
#include <cmath>

namespace boxfill {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Integral of [beta - ramp(t)]_+ over [a, b]. The ramp is below beta only
// for t < tau2; with s = beta*gamma*(tau2 - t) the integrand becomes
// (1/gamma) * s/(1+s) ds.
double ramp_shortfall(const OptimalRamp& r, double a, double b) {
    b = std::min(b, r.tau2);
    if (b <= a) return 0.0;
    const auto primitive = [&](double t) {
        const double s = r.beta * r.gamma * (r.tau2 - t);
        return (s - std::log1p(s)) / r.gamma;
    };
    return primitive(a) - primitive(b);
}

} // namespace

double evaluate(const Shape& shape, double t) {
    return std::visit(overloaded{
                          [](const Constant& c) { return c.level; },
                          [t](const OptimalRamp& r) {
                              return r.beta / (1.0 + r.beta * r.gamma * (r.tau2 - t));
                          },
                      },
                      shape);
}

bool Segment::is_zero() const {
    const auto* c = std::get_if<Constant>(&shape);
    return c != nullptr && c->level == 0.0;
}

ControlPolicy::ControlPolicy(std::vector<Segment> segments, std::string name)
    : segments_(std::move(segments)), name_(std::move(name)) {
    if (segments_.empty()) throw ConfigError("policy has no segments");
    if (segments_.front().t_start != 0.0) {
        throw ConfigError("policy must start at t = 0");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!(s.t_end > s.t_start)) {
            throw ConfigError("policy segment " + std::to_string(i) + " is empty or reversed");
        }
        if (i > 0 && s.t_start != segments_[i - 1].t_end) {
            throw ConfigError("policy gap between segments " + std::to_string(i - 1) + " and " +
                              std::to_string(i));
        }
        // Both ends suffice: constants are flat, ramps are monotone.
        const double lo = s.rate(s.t_start);
        const double hi = std::isfinite(s.t_end) ? s.rate(s.t_end) : lo;
        if (!(lo >= 0.0) || !(hi >= 0.0)) {
            throw ConfigError("policy segment " + std::to_string(i) + " has a negative rate");
        }
        if (const auto* r = std::get_if<OptimalRamp>(&s.shape)) {
            if (!std::isfinite(s.t_end)) {
                throw ConfigError("ramp segment must have a finite end");
            }
            if (1.0 + r->beta * r->gamma * (r->tau2 - s.t_end) <= 0.0 ||
                1.0 + r->beta * r->gamma * (r->tau2 - s.t_start) <= 0.0) {
                throw ConfigError("ramp segment crosses its pole");
            }
        }
    }
}

std::size_t ControlPolicy::segment_at(double t) const {
    if (segments_.empty() || t < 0.0) return npos;
    if (t == 0.0) return 0;
    // First segment whose end is >= t owns (t_start, t_end].
    const auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                                     [](const Segment& s, double v) { return s.t_end < v; });
    if (it == segments_.end()) return npos;
    return static_cast<std::size_t>(it - segments_.begin());
}

double ControlPolicy::rate(double t) const {
    const std::size_t i = segment_at(t);
    if (i == npos) {
        throw ConfigError("policy does not cover t = " + std::to_string(t));
    }
    return segments_[i].rate(t);
}

double ControlPolicy::cost_until(double t, double beta) const {
    double total = 0.0;
    for (const Segment& s : segments_) {
        if (s.t_start >= t) break;
        const double a = s.t_start;
        const double b = std::min(s.t_end, t);
        total += std::visit(overloaded{
                                [&](const Constant& c) { return std::max(beta - c.level, 0.0) * (b - a); },
                                [&](const OptimalRamp& r) {
                                    // The ramp's own beta is the policy's unregulated rate.
                                    return ramp_shortfall(r, a, b);
                                },
                            },
                            s.shape);
    }
    return total;
}

} // namespace boxfill
