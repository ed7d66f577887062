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

#include <stdexcept>
#include <string>

namespace boxfill {

/// Base for every error raised by the library. The CLI maps the two
/// families below to distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid inputs: bad parameters, malformed policies, uncovered spans.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: non-finite state, bracket failure, an event that never fires.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A query whose answer does not exist for these parameters, e.g. asking
/// for the first time y reaches a level above the epidemic peak.
class InfeasibleQuery : public NumericError {
public:
    using NumericError::NumericError;
};

/// Epidemic constants. Rates are per unit time, shares are population fractions.
struct ModelParams {
    double alpha = 0.3;    ///< removal rate
    double beta = 1.0;     ///< unregulated transmission rate
    double gamma = 0.2;    ///< ICU capacity share
    double epsilon = 0.01; ///< initial infected share

    double x0() const { return 1.0 - epsilon; }
    double y0() const { return epsilon; }

    /// Susceptible share below which the unregulated epidemic declines.
    double herd_threshold() const { return alpha / beta; }

    /// epsilon < gamma and alpha < beta: the regime where the ICU
    /// constraint can matter at all.
    bool interesting() const { return epsilon < gamma && alpha < beta; }

    /// Throws ConfigError unless alpha, beta > 0 and gamma, epsilon in (0, 1).
    void validate() const;
};

/// A point (x, y) of the state simplex: susceptible and infected shares.
struct EpidemicState {
    double x = 0.0;
    double y = 0.0;

    static EpidemicState initial(const ModelParams& p) { return {p.x0(), p.y0()}; }

    /// 0 < x < 1, 0 < y < 1, x + y <= 1.
    bool valid() const;
};

struct SimConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.5;
    double y_stop = 1e-9;
    double t_max = 400.0;
    double output_dt = 0.05;

    void validate() const;
};

std::string describe(const ModelParams& p);

} // namespace boxfill
