// Copyright 2026 The rbmscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBMSCOPE_TOOLS_COMMANDS_HPP
#define RBMSCOPE_TOOLS_COMMANDS_HPP

namespace rbmscope::cli {

/// Exit codes: 0 success, 1 configuration error, 2 data error,
/// 3 numerical failure.
int run_cli(int argc, char** argv);

}  // namespace rbmscope::cli

#endif  // RBMSCOPE_TOOLS_COMMANDS_HPP
