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

#include "freqbin/cli/report.hpp"

#include <cstdio>

#include "json.hpp"

using namespace freqbin;
using namespace freqbin::cli;
using json = nlohmann::ordered_json;

#ifndef FREQBIN_VERSION
#define FREQBIN_VERSION "unknown"
#endif

std::string freqbin::cli::format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.13g", x);
    return buf;
}

std::string freqbin::cli::format_complex(Complex z) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%#.13g %c %#.13gi", z.real(), z.imag() < 0 ? '-' : '+', std::abs(z.imag()));
    return buf;
}

namespace {

json header_json(const ReportHeader &h) {
    json params = json::object();
    for (const auto &[k, v] : h.parameters) {
        params[k] = v;
    }
    json out;
    out["tool"] = "freqbin";
    out["version"] = FREQBIN_VERSION;
    out["mode"] = h.mode;
    out["circuit"] = h.circuit_path;
    out["name"] = h.circuit_name;
    out["parameters"] = params;
    return out;
}

json complex_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

json result_json(const SimulationResult &r) {
    json out;
    out["photon_number"] = r.photon_number;
    out["n_photon_probability"] = r.n_photon_probability;
    out["probability"] = r.pattern_probability;
    out["fraction_of_n_photon_sector"] = r.coincidence_fraction;
    out["colour_pattern"] = colour_pattern_str(r.colour_pattern);
    json paths = json::array();
    for (auto p : r.bin_state.paths) {
        paths.push_back(p);
    }
    json amps = json::object();
    for (const auto &[bins, amp] : r.bin_state.amplitudes) {
        amps[bin_string_str(bins)] = complex_json(amp);
    }
    out["bin_state"] = {{"paths", paths}, {"amplitudes", amps}};
    out["herald_bins"] = r.herald_bins.empty() ? json(nullptr) : json(bin_string_str(r.herald_bins));
    out["fidelity"] = r.fidelity ? json(*r.fidelity) : json(nullptr);
    out["purity"] = r.purity;
    out["rates"] = {{"rep_rate", r.rates.rep_rate},
                    {"pair_prob_per_pulse", r.rates.pair_prob_per_pulse},
                    {"four_photon_rate", r.rates.four_photon_rate},
                    {"entangled_state_rate", r.rates.entangled_state_rate}};
    return out;
}

std::string params_text(const ParameterSet &params) {
    if (params.empty()) {
        return "none";
    }
    std::string out;
    for (const auto &[k, v] : params) {
        out += (out.empty() ? "" : ", ") + k + "=" + format_number(v);
    }
    return out;
}

void line(std::string &out, const char *key, const std::string &value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%-22s", key);
    out += buf;
    out += value;
    out += '\n';
}

}  // namespace

std::string freqbin::cli::report_run(const ReportHeader &h, const SimulationResult &r, OutputFormat format) {
    if (format == OutputFormat::Structured) {
        json doc;
        doc["header"] = header_json(h);
        doc["result"] = result_json(r);
        return doc.dump(2) + "\n";
    }
    std::string out;
    line(out, "circuit", h.circuit_path + " (" + h.circuit_name + ")");
    line(out, "parameters", params_text(h.parameters));
    line(out, "photon_number", std::to_string(r.photon_number));
    line(out, "n_photon_probability", format_number(r.n_photon_probability));
    line(out, "probability", format_number(r.pattern_probability));
    line(out, "fraction", format_number(r.coincidence_fraction));
    line(out, "colour_pattern", colour_pattern_str(r.colour_pattern));
    std::string paths;
    for (auto p : r.bin_state.paths) {
        paths += (paths.empty() ? "" : ",") + std::to_string(p);
    }
    line(out, "state", "paths " + paths);
    for (const auto &[bins, amp] : r.bin_state.amplitudes) {
        out += "  |" + bin_string_str(bins) + ">  " + format_complex(amp) + "\n";
    }
    if (!r.herald_bins.empty()) {
        line(out, "herald_bins", bin_string_str(r.herald_bins));
    }
    line(out, "fidelity", r.fidelity ? format_number(*r.fidelity) : "n/a (no target)");
    line(out, "purity", format_number(r.purity));
    line(out, "four_photon_rate", format_number(r.rates.four_photon_rate) + " Hz");
    line(out, "entangled_state_rate", format_number(r.rates.entangled_state_rate) + " Hz");
    return out;
}

std::string freqbin::cli::report_sweep(const ReportHeader &h, const ParameterGrid &grid,
                                       const std::vector<SweepRow> &rows, OutputFormat format) {
    if (format == OutputFormat::Structured) {
        json doc;
        doc["header"] = header_json(h);
        json axes = json::object();
        for (const auto &[name, values] : grid) {
            axes[name] = values;
        }
        doc["header"]["grid"] = axes;
        json list = json::array();
        for (const auto &row : rows) {
            json params = json::object();
            for (const auto &[k, v] : row.assignment) {
                params[k] = v;
            }
            json entry;
            entry["parameters"] = params;
            if (row.ok()) {
                entry["result"] = result_json(row.result());
            } else {
                entry["error"] = row.error();
            }
            list.push_back(entry);
        }
        doc["rows"] = list;
        return doc.dump(2) + "\n";
    }
    std::string out;
    line(out, "circuit", h.circuit_path + " (" + h.circuit_name + ")");
    line(out, "rows", std::to_string(rows.size()));
    std::string head;
    for (const auto &[name, values] : grid) {
        (void)values;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%-20s ", name.c_str());
        head += buf;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-20s %-20s %-20s %-20s", "fraction", "probability", "fidelity",
                  "entangled_rate_hz");
    head += buf;
    while (!head.empty() && head.back() == ' ') {
        head.pop_back();
    }
    out += head + "\n";
    for (const auto &row : rows) {
        std::string cols;
        for (const auto &[name, values] : grid) {
            (void)values;
            std::snprintf(buf, sizeof(buf), "%-20s ", format_number(parameter_value(row.assignment, name)).c_str());
            cols += buf;
        }
        if (row.ok()) {
            const auto &r = row.result();
            std::snprintf(buf, sizeof(buf), "%-20s %-20s %-20s %-20s", format_number(r.coincidence_fraction).c_str(),
                          format_number(r.pattern_probability).c_str(),
                          r.fidelity ? format_number(*r.fidelity).c_str() : "n/a",
                          format_number(r.rates.entangled_state_rate).c_str());
            cols += buf;
        } else {
            cols += "error: " + row.error();
        }
        // Trailing padding is noise in golden files.
        while (!cols.empty() && cols.back() == ' ') {
            cols.pop_back();
        }
        out += cols + "\n";
    }
    return out;
}

std::string freqbin::cli::report_check(const std::vector<acceptance::CriterionResult> &results, OutputFormat format) {
    if (format == OutputFormat::Structured) {
        json doc;
        doc["header"] = {{"tool", "freqbin"}, {"version", FREQBIN_VERSION}, {"mode", "check"}};
        json list = json::array();
        bool all = true;
        for (const auto &r : results) {
            list.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
            all = all && r.passed;
        }
        doc["criteria"] = list;
        doc["passed"] = all;
        return doc.dump(2) + "\n";
    }
    std::string out;
    for (const auto &r : results) {
        out += acceptance::format_line(r) + "\n";
    }
    return out;
}
