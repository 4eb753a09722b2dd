// Copyright 2026 The Fairpoison Authors
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

#ifndef FAIRPOISON_CLI_H_
#define FAIRPOISON_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace fairpoison {

// args excludes the program name. Returns the process exit code: 0 on
// success, 1 on usage or validation errors, 2 on runtime failures.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// 1 for caller-correctable errors, 2 otherwise. Requires !status.ok().
int ExitCodeForStatus(const absl::Status& status);

}  // namespace fairpoison

#endif  // FAIRPOISON_CLI_H_
