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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "boxfill/model.hpp"
#include "boxfill/policy.hpp"

namespace boxfill {

struct Sample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double b = 0.0; ///< left-continuous policy value at t
    double cumulative_cost = 0.0;
};

struct EventRecord {
    std::string label;
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

enum class Termination { y_below_stop, horizon_cap, event_hit, stop_rule };

const char* to_string(Termination t);

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<EventRecord> events;
    Termination terminated_by = Termination::horizon_cap;

    /// Supremum of y over the whole run, refined on the dense output
    /// rather than read off the samples.
    double max_y = 0.0;
    double t_of_max_y = 0.0;

    const Sample& back() const { return samples.back(); }
    double cost() const { return samples.empty() ? 0.0 : samples.back().cumulative_cost; }
};

/// Scalar event function. An event fires at the first root of g after the
/// start; if g is exactly zero at the start, it fires immediately.
struct EventSpec {
    std::string label;
    std::function<double(double t, const EpidemicState& s)> g;

    static EventSpec y_reaches(double level);
    static EventSpec x_reaches(double level);
};

/// Extra termination test evaluated at the end of every accepted step.
using StopRule = std::function<bool(double t, const EpidemicState& s)>;

struct SimOptions {
    std::optional<EventSpec> event;
    StopRule stop_rule;
    bool record_samples = true;
    double t_start = 0.0; ///< policy time at which `init` is given
};

/// Integrates the controlled SIR system x' = -bxy, y' = bxy - alpha*y with a
/// cumulative cost channel c' = [beta - b]_+.
///
/// Integration restarts at every policy breakpoint so each step sees a
/// smooth right-hand side. Runs until y < cfg.y_stop, t reaches cfg.t_max,
/// or the optional event/stop rule fires. Samples are emitted at every
/// multiple of cfg.output_dt, at each breakpoint and at the final time.
///
/// Throws ConfigError if the policy does not cover the requested span and
/// NumericError if the state becomes non-finite.
Trajectory simulate(const ModelParams& params,
                    const ControlPolicy& policy,
                    const EpidemicState& init,
                    const SimConfig& cfg,
                    const SimOptions& opts = {});

struct EventResult {
    Trajectory trajectory;
    double event_time = 0.0;
    EpidemicState event_state;
};

/// Runs `simulate` until the event fires, located by bisection on the dense
/// output to 1e-10 in time. Throws InfeasibleQuery if the run ends first.
EventResult simulate_until(const ModelParams& params,
                           const ControlPolicy& policy,
                           const EpidemicState& init,
                           const SimConfig& cfg,
                           const EventSpec& event);

/// Orbit of a constant policy b = delta through `from`:
/// y = from.y + (alpha/delta) ln(x/from.x) - x + from.x.
double orbit_constant(const ModelParams& params, double delta, const EpidemicState& from, double x);

/// Peak infected share under b = delta from the initial state. Requires
/// delta > alpha/(1 - epsilon).
double peak_infected(const ModelParams& params, double delta);

/// Peak of y reached from an arbitrary state under constant delta; equals
/// from.y when from.x <= alpha/delta.
double peak_from(const ModelParams& params, double delta, const EpidemicState& from);

/// The unique root in (0, from.x) of x = (alpha/delta) ln(x/from.x) + from.x + from.y.
double limit_susceptible(const ModelParams& params, double delta, const EpidemicState& from);

} // namespace boxfill
