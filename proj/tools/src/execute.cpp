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

#include "freqbin/cli/execute.hpp"

#include <fstream>
#include <ostream>
#include <set>

#include "freqbin/acceptance.hpp"
#include "freqbin/cli/circuit_file.hpp"
#include "freqbin/cli/syntax.hpp"
#include "freqbin/error.hpp"

using namespace freqbin;
using namespace freqbin::cli;

namespace {

std::string trim(std::string s) {
    auto not_space = [](char c) { return c != ' ' && c != '\t'; };
    while (!s.empty() && !not_space(s.back())) {
        s.pop_back();
    }
    std::size_t k = 0;
    while (k < s.size() && !not_space(s[k])) {
        ++k;
    }
    return s.substr(k);
}

std::pair<std::string, std::string> split_eq(const std::string &text) {
    auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw SimulationError(ErrorCode::InvalidArgument, "expected name=value, got '" + text + "'");
    }
    std::string name = trim(text.substr(0, eq));
    if (name.empty()) {
        throw SimulationError(ErrorCode::InvalidArgument, "missing parameter name in '" + text + "'");
    }
    return {name, text.substr(eq + 1)};
}

double eval_arg(const std::string &name, const std::string &text) {
    try {
        return evaluate_text(text);
    } catch (const SyntaxError &e) {
        throw SimulationError(ErrorCode::InvalidArgument, "bad value for '" + name + "': " + e.what());
    }
}

void warn_sources(const Circuit &c, std::ostream &err) {
    for (const auto &s : c.sources) {
        for (const auto &w : s.source.warnings()) {
            err << "warning: source '" << s.source.label << "' on path " << s.path << ": " << w << "\n";
        }
    }
}

int emit(const RunConfig &config, const std::string &text, std::ostream &out, std::ostream &err) {
    if (!config.output_path) {
        out << text;
        return kExitOk;
    }
    std::ofstream file(*config.output_path, std::ios::binary);
    file << text;
    if (!file) {
        err << "error: cannot write " << *config.output_path << "\n";
        return kExitSimulationError;
    }
    return kExitOk;
}

std::string params_text_for_err(const ParameterSet &params) {
    std::string out;
    for (const auto &[k, v] : params) {
        out += (out.empty() ? "" : ", ") + k + "=" + format_number(v);
    }
    return out;
}

int run_check(const RunConfig &config, std::ostream &out, std::ostream &err) {
    auto results = acceptance::run_builtin();
    int code = emit(config, report_check(results, config.format), out, err);
    for (const auto &r : results) {
        if (!r.passed) {
            return kExitCheckFailed;
        }
    }
    return code;
}

}  // namespace

std::pair<std::string, double> freqbin::cli::parse_assignment(const std::string &text) {
    auto [name, value] = split_eq(text);
    return {name, eval_arg(name, value)};
}

std::pair<std::string, std::vector<double>> freqbin::cli::parse_grid_axis(const std::string &text) {
    auto [name, list] = split_eq(text);
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        std::string item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        values.push_back(eval_arg(name, item));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return {name, values};
}

int freqbin::cli::execute(const RunConfig &config, std::ostream &out, std::ostream &err) {
    if (config.mode == RunMode::Check) {
        return run_check(config, out, err);
    }
    try {
        if (config.circuit_path.empty()) {
            err << "error: no circuit file given\n";
            return kExitInputError;
        }
        CircuitDocument doc = CircuitDocument::load(config.circuit_path);
        ReportHeader header;
        header.circuit_path = config.circuit_path;

        if (config.mode == RunMode::Run) {
            if (!config.grid.empty()) {
                err << "error: --grid needs sweep mode\n";
                return kExitInputError;
            }
            Circuit circuit = doc.resolve(config.overrides);
            warn_sources(circuit, err);
            header.mode = "run";
            header.circuit_name = circuit.name;
            header.parameters = doc.parameters(config.overrides);
            SimulationResult result = run(circuit);
            return emit(config, report_run(header, result, config.format), out, err);
        }

        if (config.grid.empty()) {
            err << "error: sweep mode needs at least one --grid axis\n";
            return kExitInputError;
        }
        std::vector<Diagnostic> problems;
        std::set<std::string> declared;
        for (const auto &kv : doc.parameters()) {
            declared.insert(kv.first);
        }
        std::vector<std::string> axes;
        std::set<std::string> seen;
        for (const auto &[name, values] : config.grid) {
            if (!declared.count(name)) {
                problems.push_back({0, "--grid " + name, "no parameter named '" + name + "' is declared"});
            }
            if (!seen.insert(name).second) {
                problems.push_back({0, "--grid " + name, "axis given twice"});
            }
            for (const auto &kv : config.overrides) {
                if (kv.first == name) {
                    problems.push_back({0, "--grid " + name, "parameter is both swept and fixed with --set"});
                }
            }
            axes.push_back(name);
        }
        if (!problems.empty()) {
            throw ValidationError(config.circuit_path, problems);
        }
        // Resolving the defaults up front reports file problems once, with
        // exit code 2, rather than once per row.
        Circuit base = doc.resolve(config.overrides);
        warn_sources(base, err);
        header.mode = "sweep";
        header.circuit_name = base.name;
        header.parameters = doc.parameters(config.overrides);

        CircuitTemplate tmpl = doc.as_template(config.overrides, axes);
        std::vector<SweepRow> rows = sweep(tmpl, config.grid, std::max(1u, config.threads));
        std::set<std::string> free(axes.begin(), axes.end());
        for (const auto &kv : config.overrides) {
            free.insert(kv.first);
        }
        for (auto &row : rows) {
            // Report the values actually used, derived parameters included.
            ParameterSet used;
            for (const auto &kv : row.assignment) {
                if (free.count(kv.first)) {
                    used.push_back(kv);
                }
            }
            row.assignment = doc.parameters(used);
            if (!row.ok()) {
                err << "warning: row " << params_text_for_err(row.assignment) << ": " << row.error() << "\n";
            }
        }
        return emit(config, report_sweep(header, config.grid, rows, config.format), out, err);
    } catch (const CircuitFileError &e) {
        err << e.what() << "\n";
        return kExitInputError;
    } catch (const SimulationError &e) {
        err << "error: " << e.what() << "\n";
        return kExitSimulationError;
    }
}
