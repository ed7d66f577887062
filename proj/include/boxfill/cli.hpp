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

#include <iosfwd>

namespace boxfill::cli {

enum ExitCode : int {
    ok = 0,
    config_error = 2,
    numeric_failure = 3,
    verification_gap = 4,
};

/// Entry point of the `boxfill` tool. Usage text and error messages go to
/// `err`; command summaries go to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace boxfill::cli
