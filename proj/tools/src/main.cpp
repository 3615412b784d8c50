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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freqbin/cli/execute.hpp"
#include "freqbin/error.hpp"

using namespace freqbin::cli;

int main(int argc, char **argv) {
    CLI::App app{"freqbin: frequency-bin photonic circuit simulator"};
    app.set_version_flag("--version", FREQBIN_VERSION);

    std::string mode_name;
    std::string positional_circuit;
    std::string circuit_flag;
    std::vector<std::string> sets;
    std::vector<std::string> grids;
    std::string out_path;
    std::string format_name = "text";
    bool check = false;
    unsigned threads = 1;

    app.add_option("mode", mode_name, "run, sweep or check")->check(CLI::IsMember({"run", "sweep", "check"}));
    app.add_option("circuit_file", positional_circuit, "Circuit description file");
    app.add_option("--circuit", circuit_flag, "Circuit description file");
    app.add_option("--set", sets, "Override a declared parameter: name=value")->allow_extra_args(false);
    app.add_option("--grid", grids, "Sweep axis: name=v1,v2,...")->allow_extra_args(false);
    app.add_option("--out", out_path, "Write the report to a file instead of stdout");
    app.add_option("--format", format_name, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    app.add_flag("--check", check, "Run the built-in acceptance suite");
    app.add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    RunConfig config;
    if (check || mode_name == "check") {
        config.mode = RunMode::Check;
    } else if (mode_name == "sweep" || (mode_name.empty() && !grids.empty())) {
        config.mode = RunMode::Sweep;
    } else {
        config.mode = RunMode::Run;
    }
    if (!positional_circuit.empty() && !circuit_flag.empty() && positional_circuit != circuit_flag) {
        std::cerr << "error: circuit given both positionally and with --circuit\n";
        return kExitInputError;
    }
    config.circuit_path = circuit_flag.empty() ? positional_circuit : circuit_flag;
    config.format = format_name == "structured" ? OutputFormat::Structured : OutputFormat::Text;
    config.threads = threads;
    if (!out_path.empty()) {
        config.output_path = out_path;
    }
    try {
        for (const auto &s : sets) {
            config.overrides.push_back(parse_assignment(s));
        }
        for (const auto &g : grids) {
            config.grid.push_back(parse_grid_axis(g));
        }
    } catch (const freqbin::SimulationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return execute(config, std::cout, std::cerr);
}
