// Copyright 2026 The Netlens Authors
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

namespace netlens::cli {

inline constexpr const char* kVersion = "netlens 0.1.0";

// Runs one command line. Returns 0 on success, 2 on a usage error and 1 when
// the command itself fails.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace netlens::cli
