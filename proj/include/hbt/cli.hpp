/*
   Copyright 2026 The hbtsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <iosfwd>

namespace hbt::cli {

/// Exit codes of the hbtsim front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1, ///< outputs written, a consistency check failed
    kExitUsage = 2,       ///< bad flags or config
    kExitRuntime = 3,     ///< I/O, parse or model error; partial outputs removed
};

/// Entry point of the command-line tool, with injectable streams for testing.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hbt::cli
