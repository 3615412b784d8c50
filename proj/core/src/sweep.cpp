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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "freqbin/circuits.hpp"
#include "freqbin/error.hpp"

using namespace freqbin;

double freqbin::parameter_value(const ParameterSet &params, const std::string &name) {
    for (const auto &[key, value] : params) {
        if (key == name) {
            return value;
        }
    }
    throw SimulationError(ErrorCode::InvalidArgument, "unknown parameter '" + name + "'");
}

std::vector<SweepRow> freqbin::sweep(const CircuitTemplate &tmpl, const ParameterGrid &grid, unsigned threads) {
    if (grid.empty()) {
        throw SimulationError(ErrorCode::InvalidArgument, "sweep grid is empty");
    }
    std::size_t total = 1;
    for (const auto &[name, values] : grid) {
        bool declared = std::any_of(tmpl.defaults.begin(), tmpl.defaults.end(),
                                    [&](const auto &kv) { return kv.first == name; });
        if (!declared) {
            throw SimulationError(ErrorCode::InvalidArgument, "grid axis '" + name + "' is not a declared parameter");
        }
        if (values.empty()) {
            throw SimulationError(ErrorCode::InvalidArgument, "grid axis '" + name + "' has no values");
        }
        total *= values.size();
    }

    std::vector<SweepRow> rows(total);
    for (std::size_t index = 0; index < total; ++index) {
        ParameterSet assignment = tmpl.defaults;
        std::size_t rem = index;
        for (std::size_t axis = grid.size(); axis-- > 0;) {
            const auto &[name, values] = grid[axis];
            double v = values[rem % values.size()];
            rem /= values.size();
            for (auto &kv : assignment) {
                if (kv.first == name) {
                    kv.second = v;
                }
            }
        }
        rows[index].assignment = std::move(assignment);
    }

    auto run_row = [&](std::size_t index) {
        SweepRow &row = rows[index];
        try {
            row.outcome = run(tmpl.build(row.assignment));
        } catch (const std::exception &e) {
            row.outcome = std::string(e.what());
        }
    };

    unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
    if (workers == 1) {
        for (std::size_t i = 0; i < total; ++i) {
            run_row(i);
        }
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < total; i = next++) {
                run_row(i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    return rows;
}

CircuitTemplate freqbin::w_device_template() {
    CircuitTemplate t;
    t.defaults = {{"b2", 0.1}, {"beta_ratio", 2.0}, {"phase", 0.0}};
    t.build = [](const ParameterSet &p) {
        const double b2 = parameter_value(p, "b2");
        const Complex beta2 = std::polar(b2, parameter_value(p, "phase"));
        const Complex beta1 = parameter_value(p, "beta_ratio") * b2;
        return build_w_device(beta1, beta2);
    };
    return t;
}

CircuitTemplate freqbin::ghz_device_template() {
    CircuitTemplate t;
    t.defaults = {{"b", 0.1}, {"phase", 0.0}};
    t.build = [](const ParameterSet &p) {
        const double b = parameter_value(p, "b");
        const Complex beta2 = std::polar(b, parameter_value(p, "phase"));
        return build_ghz_device({Complex{b}, beta2, Complex{b}, Complex{b}});
    };
    return t;
}
