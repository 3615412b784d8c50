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

#ifndef FREQBIN_ACCEPTANCE_HPP
#define FREQBIN_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace freqbin::acceptance {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string detail;
};

CriterionResult ghz_state_and_fraction();
CriterionResult w_state_and_fraction();
CriterionResult w_fraction_formula_equivalence();
CriterionResult normalization_constants();
CriterionResult element_unitarity_suite();
CriterionResult ghz_same_source_exclusion();
CriterionResult rate_orders_of_magnitude();
CriterionResult bell_first_order_limits();

/// Criteria that need nothing beyond the library (AC-1 to AC-7, AC-9).
std::vector<CriterionResult> run_builtin();

/// `PASS AC-1 ...` / `FAIL AC-1 ...`.
std::string format_line(const CriterionResult &r);

}  // namespace freqbin::acceptance

#endif
