// Copyright 2026 The HDE Authors.
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

#ifndef HDE_CLI_HPP_
#define HDE_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace hde {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
};

// Runs one command line (without the program name). Human output goes to
// `out`, diagnostics to `err`; `--json` switches `out` to machine format.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hde

#endif  // HDE_CLI_HPP_
