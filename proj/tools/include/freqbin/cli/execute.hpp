// Copyright 2026 The freqbin Authors
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

#ifndef FREQBIN_CLI_EXECUTE_HPP
#define FREQBIN_CLI_EXECUTE_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "freqbin/circuits.hpp"
#include "freqbin/cli/report.hpp"

namespace freqbin::cli {

enum class RunMode { Run, Sweep, Check };

enum ExitCode : int {
    kExitOk = 0,
    kExitSimulationError = 1,
    kExitInputError = 2,
    kExitCheckFailed = 3,
};

struct RunConfig {
    std::string circuit_path;
    ParameterSet overrides;
    ParameterGrid grid;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::Text;
    RunMode mode = RunMode::Run;
    unsigned threads = 1;
};

/// Parses `name=value`; the value may be an expression such as `pi/4`.
std::pair<std::string, double> parse_assignment(const std::string &text);
/// Parses `name=v1,v2,...`.
std::pair<std::string, std::vector<double>> parse_grid_axis(const std::string &text);

/// Runs one configuration. Reports go to `out` (or the output file),
/// diagnostics and warnings to `err`. Returns the process exit code.
int execute(const RunConfig &config, std::ostream &out, std::ostream &err);

}  // namespace freqbin::cli

#endif
