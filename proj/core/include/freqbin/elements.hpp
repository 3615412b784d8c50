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

#ifndef FREQBIN_ELEMENTS_HPP
#define FREQBIN_ELEMENTS_HPP

#include <optional>
#include <string>
#include <variant>

#include "freqbin/fock.hpp"

namespace freqbin {

/// Selects modes by colour and/or bin. With neither set it matches all modes.
struct ModePredicate {
    std::optional<Colour> colour;
    std::optional<BinIndex> bin;

    bool matches(const ModeLabel &mode) const;
    std::string str() const;

    bool operator==(const ModePredicate &) const = default;
};

/// Symmetric two-port coupler [[T, R], [R, T]].
struct CouplerParams {
    Complex transmission;
    Complex reflection;

    /// T = 1/√2, R = i/√2.
    static CouplerParams balanced();
    /// T = cos θ, R = i sin θ.
    static CouplerParams from_theta(double theta);

    /// Throws NonUnitaryCoupler unless |T|²+|R|² = 1 and T·R* + R·T* = 0
    /// to within 10⁻¹².
    void validate() const;

    bool operator==(const CouplerParams &) const = default;
};

/// Relabels path_in signal photons onto path_signal and idler photons onto
/// path_idler. Throws ModeCollision when a ket already holds photons in a
/// target mode that did not come from path_in.
StateVector apply_demux(const StateVector &state, PathIndex path_in, PathIndex path_signal,
                        PathIndex path_idler);

/// Exchanges path_a and path_b for modes matching `pred`.
StateVector apply_adddrop_swap(const StateVector &state, PathIndex path_a, PathIndex path_b,
                               const ModePredicate &pred);

/// a†_a -> T a†_a + R a†_b and a†_b -> R a†_a + T a†_b for every colour/bin.
StateVector apply_directional_coupler(const StateVector &state, PathIndex path_a, PathIndex path_b,
                                      const CouplerParams &params);

struct Demux {
    PathIndex in = 0;
    PathIndex signal_out = 0;
    PathIndex idler_out = 0;
    bool operator==(const Demux &) const = default;
};

struct AddDrop {
    PathIndex path_a = 0;
    PathIndex path_b = 0;
    ModePredicate pred;
    bool operator==(const AddDrop &) const = default;
};

struct Coupler {
    PathIndex path_a = 0;
    PathIndex path_b = 0;
    CouplerParams params = CouplerParams::balanced();
    bool operator==(const Coupler &) const = default;
};

/// Frequency filter in front of a detector. It does not act on the state;
/// the circuit folds it into the detection pattern as a herald constraint.
struct Filter {
    PathIndex path = 0;
    ModePredicate pred;
    bool operator==(const Filter &) const = default;
};

using Element = std::variant<Demux, AddDrop, Coupler, Filter>;

StateVector apply_element(const StateVector &state, const Element &element);

}  // namespace freqbin

#endif
