// Copyright 2026 The ftdnd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FTDND_CLI_H
#define FTDND_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace ftdnd {

constexpr int kSchemaVersion = 1;

enum ExitCode : int {
    kExitOk = 0,
    kExitRuntime = 1,
    kExitConfig = 2,      // bad flags, bad JSON, unknown ids, out-of-range parameters
    kExitValidation = 3,  // code violations, malformed artifacts, shape mismatches
    kExitDivergence = 4,  // training produced non-finite values
};

/// args[0] is the program name. Primary output goes to `out` unless --out names a file.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace ftdnd

#endif
