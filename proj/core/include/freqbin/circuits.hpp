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

#ifndef FREQBIN_CIRCUITS_HPP
#define FREQBIN_CIRCUITS_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "freqbin/elements.hpp"
#include "freqbin/fock.hpp"
#include "freqbin/postselect.hpp"
#include "freqbin/sources.hpp"

namespace freqbin {

struct SourcePlacement {
    SourceSpec source;
    PathIndex path = 0;
    /// Highest pair order kept when emitting (1 or 2).
    int max_pairs = 1;

    bool operator==(const SourcePlacement &) const = default;
};

struct RateParams {
    double pair_prob = 0.1;
    double rep_rate = 1e6;

    bool operator==(const RateParams &) const = default;
};

struct Circuit {
    std::string name;
    std::vector<SourcePlacement> sources;
    std::vector<Element> elements;
    DetectionPattern pattern;
    std::vector<PathIndex> logical_paths;
    std::vector<PathIndex> herald_paths;
    /// Fidelity reference for the logical register; optional for custom devices.
    std::optional<BinRegisterState> target;
    RateParams rates;

    /// Every wiring problem found, in declaration order. Empty when valid.
    std::vector<std::string> problems() const;
    /// Throws SimulationError(InvalidArgument) listing all problems.
    void validate() const;

    /// The pattern with Filter elements folded in as path constraints.
    DetectionPattern effective_pattern() const;

    bool operator==(const Circuit &) const = default;
};

struct RateEstimate {
    double rep_rate = 0.0;
    double pair_prob_per_pulse = 0.0;
    double four_photon_rate = 0.0;
    double entangled_state_rate = 0.0;
};

/// four_photon_rate = pair_prob² · rep_rate; entangled_state_rate = fraction · four_photon_rate.
RateEstimate estimate_rates(double pair_prob, double rep_rate, double fraction);

struct SimulationResult {
    std::uint32_t photon_number = 0;
    /// Weight of the detected photon-number sector in the emitted state.
    double n_photon_probability = 0.0;
    /// Absolute pattern weight, n_photon_probability × coincidence_fraction.
    double pattern_probability = 0.0;
    double coincidence_fraction = 0.0;
    StateVector post_selected;
    std::vector<Colour> colour_pattern;
    BinRegisterState bin_state;
    BinString herald_bins;
    std::optional<double> fidelity;
    double purity = 1.0;
    RateEstimate rates;
};

/// Four-photon GHZ device: sources (β₁,β₂) on path 1 and (β₃,β₄) on path 4, demuxed
/// into signals 1/4 and idlers 2/3, then an I1 add-drop between 2 and 3.
Circuit build_ghz_device(const std::array<Complex, 4> &beta, int max_pairs = 1);

/// Heralded W device: dual-pump source on path 4, idlers demuxed to path 2,
/// couplers on (1,2) and (3,4), path 4 heralded on S1.
Circuit build_w_device(Complex beta1, Complex beta2,
                       const CouplerParams &coupler1 = CouplerParams::balanced(),
                       const CouplerParams &coupler2 = CouplerParams::balanced());

/// Emits and tensors every source, then applies the elements in order.
StateVector evolve(const Circuit &circuit);

/// Full pipeline: evolve, project onto the pattern's photon number,
/// post-select, factor colour, drop heralds, score against the target.
SimulationResult run(const Circuit &circuit);

/// Closed-form W coincidence fraction for 50-50 couplers.
double w_fraction_formula(Complex beta1, Complex beta2);

/// Closed-form GHZ coincidence fraction at first order per source.
double ghz_fraction_formula(const std::array<Complex, 4> &beta);

/// ‖C†²|vac⟩‖² for the dual-pump source: 4|β₁|⁴ + 4|β₂|⁴ + 4|β₁|²|β₂|².
double dual_pump_pair_of_pairs_norm_squared(Complex beta1, Complex beta2);

/// Heralded W branch weight: 16|β₂|⁴ + 8|β₁|²|β₂|².
double w_herald_norm_squared(Complex beta1, Complex beta2);

// Parameter sweeps.

using ParameterSet = std::vector<std::pair<std::string, double>>;
using ParameterGrid = std::vector<std::pair<std::string, std::vector<double>>>;

double parameter_value(const ParameterSet &params, const std::string &name);

struct CircuitTemplate {
    /// Declared free parameters with their default values, in declaration order.
    ParameterSet defaults;
    std::function<Circuit(const ParameterSet &)> build;
};

struct SweepRow {
    ParameterSet assignment;
    std::variant<SimulationResult, std::string> outcome;

    bool ok() const {
        return std::holds_alternative<SimulationResult>(outcome);
    }
    const SimulationResult &result() const {
        return std::get<SimulationResult>(outcome);
    }
    const std::string &error() const {
        return std::get<std::string>(outcome);
    }
};

/// Cartesian product over the grid; the first grid axis varies slowest.
/// Names must be declared in the template. Row failures are recorded in the
/// row. Rows run on up to `threads` workers and come back in grid order.
std::vector<SweepRow> sweep(const CircuitTemplate &tmpl, const ParameterGrid &grid, unsigned threads = 1);

/// W device over b2 (|β₂|), beta_ratio (β₁/β₂, real), phase (arg β₂).
CircuitTemplate w_device_template();

/// GHZ device over b (common |β|) and phase (arg of β₂).
CircuitTemplate ghz_device_template();

}  // namespace freqbin

#endif
