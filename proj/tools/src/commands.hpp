// Copyright 2026 The sdnlw Authors.
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

#ifndef SDNLW_CLI_COMMANDS_HPP
#define SDNLW_CLI_COMMANDS_HPP

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "sdnlw/cli/output.hpp"
#include "sdnlw/cli/params.hpp"

namespace sdnlw::cli {

using CommandBody = std::function<int(const Params&, OutputDir&, std::ostream&)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<OptionSpec> options;
  CommandBody body;
};

const std::vector<Command>& commands();

/// Trivial-tier checks (quick) or the extended set; one PASS/FAIL line
/// each on `out`.  Returns the number of failures.
int run_selftest(bool quick, OutputDir& dir, std::ostream& out);

}  // namespace sdnlw::cli

#endif  // SDNLW_CLI_COMMANDS_HPP
