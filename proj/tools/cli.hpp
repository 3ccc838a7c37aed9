// Copyright 2026 The qsep Authors
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


#ifndef QSEP_TOOLS_CLI_HPP
#define QSEP_TOOLS_CLI_HPP

#include <ostream>

namespace qsep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitResource = 2;
inline constexpr int kExitUsage = 64;

/// Runs one `qsep` invocation. Reports go to `out` unless --out (or the
/// QSEP_OUT_DIR default) names a file; diagnostics go to `err`.
int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qsep::cli

#endif
