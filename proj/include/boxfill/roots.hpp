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

namespace boxfill {

/// Root of a continuous f on [lo, hi] with f(lo) and f(hi) of opposite sign,
/// by bisection down to adjacent doubles. Throws NumericError when the
/// endpoints do not bracket a root; `what` names the equation in the message.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, const char* what);

} // namespace boxfill
