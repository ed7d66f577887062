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

#include "boxfill/roots.hpp"

#include <cmath>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "boxfill/model.hpp"

namespace boxfill {

double bisect_root(const std::function<double(double)>& f, double lo, double hi, const char* what) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi)) {
        throw NumericError(std::string(what) + ": non-finite value at bracket end");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NumericError(std::string(what) + ": no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    // Full mantissa tolerance; bisect stops once the bracket is a few ulps wide.
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
    std::uintmax_t max_iter = 2000;
    const auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, max_iter);
    // Return the endpoint with the smaller residual.
    return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

} // namespace boxfill
