// gramctc/include/gramctc/cli.hpp
//
// Copyright 2026 The gramctc Authors.
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

#ifndef GRAMCTC_CLI_HPP_
#define GRAMCTC_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace gramctc::cli {

// Runs one invocation; args excludes the program name. Structured results
// go to out as JSON, diagnostics to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace gramctc::cli

#endif  // GRAMCTC_CLI_HPP_
