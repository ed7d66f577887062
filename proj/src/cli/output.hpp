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

#include <string>
#include <vector>

#include <json.hpp>

#include "boxfill/sir.hpp"

namespace boxfill::cli {

/// 17 significant digits, enough to round-trip any double.
std::string fmt(double v);

/// Writes `text` to dir/name, creating dir if needed. Throws ConfigError on I/O failure.
void write_file(const std::string& dir, const std::string& name, const std::string& text);

/// Header `t,x,y,b,cumulative_cost`.
std::string trajectory_csv(const Trajectory& tr);

/// Pretty-printed with a trailing newline. Non-finite numbers become null.
std::string dump(const nlohmann::ordered_json& j);

/// A finite double, or null.
nlohmann::ordered_json number(double v);

} // namespace boxfill::cli
