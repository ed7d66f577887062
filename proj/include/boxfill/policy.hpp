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

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "boxfill/model.hpp"

namespace boxfill {

/// b(t) = level on the segment.
struct Constant {
    double level = 0.0;
};

/// The constraint-riding release ramp b(t) = beta / (1 + beta*gamma*(tau2 - t)).
/// Along it y stays at gamma and x falls linearly to alpha/beta at tau2.
struct OptimalRamp {
    double tau2 = 0.0;
    double beta = 1.0;
    double gamma = 0.2;
};

using Shape = std::variant<Constant, OptimalRamp>;

double evaluate(const Shape& shape, double t);

/// A piece of b on the half-open interval (t_start, t_end]; the first
/// segment also owns t = 0. This makes b left-continuous with right limits.
struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    Shape shape;

    double rate(double t) const { return evaluate(shape, t); }
    bool is_zero() const;
};

/// Piecewise control b(t) built from finitely many smooth segments. The
/// segment boundaries are the only places b may jump, and the integrator
/// restarts at each of them.
class ControlPolicy {
public:
    static constexpr double forever = std::numeric_limits<double>::infinity();

    ControlPolicy() = default;

    /// Throws ConfigError if segments are not contiguous from t = 0 or
    /// evaluate to a negative rate.
    explicit ControlPolicy(std::vector<Segment> segments, std::string name = {});

    const std::vector<Segment>& segments() const { return segments_; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// End of the covered span.
    double horizon() const { return segments_.empty() ? 0.0 : segments_.back().t_end; }

    /// Left-continuous value b(t). Throws ConfigError outside [0, horizon].
    double rate(double t) const;

    /// Index of the segment owning t, or npos if t is not covered.
    std::size_t segment_at(double t) const;

    /// Exact integral of [beta - b]_+ over [0, t] where it has a closed form
    /// (constant segments and the ramp).
    double cost_until(double t, double beta) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<Segment> segments_;
    std::string name_;
};

} // namespace boxfill
