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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails.

#include <cstdio>
#include <random>

#include "../oracle/dense_oracle.hpp"
#include "freqbin/acceptance.hpp"

namespace {

freqbin::acceptance::CriterionResult oracle_equivalence() {
    freqbin::acceptance::CriterionResult r;
    r.id = "AC-8";
    r.title = "dense-matrix oracle equivalence on random circuits";
    std::mt19937_64 rng(0x5eed0008);
    constexpr int kCases = 64;
    double worst = 0.0;
    int possible = 0;
    std::string failure;
    for (int k = 0; k < kCases && failure.empty(); ++k) {
        oracle::Case c = oracle::random_case(rng, k % 2);
        oracle::Comparison cmp = oracle::compare(c);
        if (!cmp.failure.empty()) {
            failure = "case " + std::to_string(k) + " [" + c.describe() + "]: " + cmp.failure;
        }
        worst = std::max({worst, cmp.max_sector_error, cmp.max_postselect_error, cmp.probability_error});
        possible += cmp.pattern_possible ? 1 : 0;
    }
    r.passed = failure.empty() && worst <= 1e-10;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "cases=%d possible_patterns=%d max|amplitude diff|=%.3e", kCases, possible,
                  worst);
    r.detail = failure.empty() ? buf : failure;
    return r;
}

}  // namespace

int main() {
    auto results = freqbin::acceptance::run_builtin();
    auto pos = results.begin();
    while (pos != results.end() && pos->id != "AC-9") {
        ++pos;
    }
    results.insert(pos, oracle_equivalence());
    bool all = true;
    for (const auto &r : results) {
        std::printf("%s\n", freqbin::acceptance::format_line(r).c_str());
        all = all && r.passed;
    }
    return all ? 0 : 1;
}
