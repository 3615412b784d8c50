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

#ifndef FREQBIN_SOURCES_HPP
#define FREQBIN_SOURCES_HPP

#include <functional>
#include <string>
#include <vector>

#include "freqbin/fock.hpp"

namespace freqbin {

/// One monomial β_k a†_first a†_second of a pair-generation operator.
struct PairTerm {
    Complex beta;
    ModeLabel first;
    ModeLabel second;

    bool operator==(const PairTerm &) const = default;
};

/// Pair-generation operator C† = Σ_k β_k a†a†. Sources are built on path 0
/// and moved onto a device path with `placed_on`.
struct SourceSpec {
    std::vector<PairTerm> terms;
    std::string label;

    /// Throws DegenerateSource if there are no terms, a term pairs a mode with
    /// itself, or Σ|β_k|² is zero.
    void validate() const;

    /// Low-gain regime diagnostics (|β_k| ≥ 1). Empty when all is well.
    std::vector<std::string> warnings() const;

    /// Σ|β_k|², the pair probability per pulse at leading order.
    double pair_probability() const;

    SourceSpec placed_on(PathIndex path) const;

    bool operator==(const SourceSpec &) const = default;
};

/// Single-pump ring pair: β₁ on (S0, I0), β₂ on (S1, I1).
SourceSpec single_pump_source(Complex beta1, Complex beta2);

/// Dual-pump ring pair: β₁ on (S0, I1), β₂ on (S1, I0).
SourceSpec dual_pump_source(Complex beta1, Complex beta2);

/// Classical pump pulse driving one resonance pair.
struct PumpEnvelope {
    std::function<Complex(double)> amplitude;
    double t0 = 0.0;
    double t1 = 0.0;
    Complex gamma = 1.0;
};

/// Gaussian α₀·exp(−t²/2τ²) truncated to [−8τ, 8τ].
PumpEnvelope gaussian_envelope(Complex alpha0, double tau, Complex gamma);

/// β = −i·γ·∫ α(t)² dt by adaptive Gauss-Kronrod quadrature. The absolute
/// error on the integral must come in under 10⁻¹²·(t1 − t0), otherwise
/// QuadratureFailure is thrown.
Complex compute_beta(const PumpEnvelope &envelope);

/// C†ᵖ|vac⟩ with no factorial weight.
StateVector pair_operator_power(const SourceSpec &source, int power);

/// Σ_{p=0}^{max_pairs} C†ᵖ|vac⟩ / p!  (vacuum amplitude fixed at 1).
/// max_pairs must be 1 or 2.
StateVector emit_state(const SourceSpec &source, int max_pairs);

/// Product state of two registers on disjoint modes; ModeCollision otherwise.
StateVector tensor_product(const StateVector &a, const StateVector &b);

}  // namespace freqbin

#endif
