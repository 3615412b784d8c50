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

#ifndef FREQBIN_CLI_REPORT_HPP
#define FREQBIN_CLI_REPORT_HPP

#include <string>
#include <vector>

#include "freqbin/acceptance.hpp"
#include "freqbin/circuits.hpp"

namespace freqbin::cli {

enum class OutputFormat { Text, Structured };

/// Run metadata kept apart from result payloads. Nothing here depends on
/// the wall clock, so identical inputs give identical bytes.
struct ReportHeader {
    std::string mode;
    std::string circuit_path;
    std::string circuit_name;
    ParameterSet parameters;
};

/// 13 significant digits with trailing zeros kept: 1 -> 1.000000000000.
std::string format_number(double x);
std::string format_complex(Complex z);

std::string report_run(const ReportHeader &header, const SimulationResult &result, OutputFormat format);
std::string report_sweep(const ReportHeader &header, const ParameterGrid &grid, const std::vector<SweepRow> &rows,
                         OutputFormat format);
std::string report_check(const std::vector<acceptance::CriterionResult> &results, OutputFormat format);

}  // namespace freqbin::cli

#endif
