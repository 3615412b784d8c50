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

#ifndef FREQBIN_POSTSELECT_HPP
#define FREQBIN_POSTSELECT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freqbin/elements.hpp"
#include "freqbin/fock.hpp"

namespace freqbin {

/// Probabilities below this are treated as exact zeros.
inline constexpr double kProbabilityFloor = 1e-28;

struct PathRequirement {
    std::uint32_t count = 1;
    /// When present, every photon counted on the path must match.
    std::optional<ModePredicate> constraint;

    bool operator==(const PathRequirement &) const = default;
};

/// Photon-number-resolving coincidence pattern over detector paths.
struct DetectionPattern {
    std::map<PathIndex, PathRequirement> requirements;
    /// Paths not listed must be dark.
    bool exclusive = true;

    void validate() const;
    bool matches(const FockBasisState &ket) const;
    std::uint32_t total_photons() const;
    std::vector<PathIndex> paths() const;

    bool operator==(const DetectionPattern &) const = default;
};

/// One photon in each listed path, exclusive.
DetectionPattern coincidence_pattern(const std::vector<PathIndex> &paths);

using BinString = std::vector<BinIndex>;

std::string bin_string_str(const BinString &bins);

/// Logical register read out in the frequency-bin degree of freedom.
struct BinRegisterState {
    std::vector<PathIndex> paths;
    std::map<BinString, Complex> amplitudes;

    double norm_squared() const;
    Complex amplitude(const BinString &bins) const;

    bool operator==(const BinRegisterState &) const = default;
};

/// Builds a normalized register on `paths`; ZeroState if all amplitudes vanish.
BinRegisterState make_register(std::vector<PathIndex> paths, std::map<BinString, Complex> amplitudes);

/// Kets satisfying the pattern, unnormalized.
StateVector project_pattern(const StateVector &state, const DetectionPattern &pattern);

struct PostSelection {
    /// Absent when the pattern is impossible (probability below the floor).
    std::optional<StateVector> state;
    double probability = 0.0;
};

/// Normalized projection onto the pattern plus the projection probability.
PostSelection postselect(const StateVector &state, const DetectionPattern &pattern);

struct ColourFactorization {
    BinRegisterState bins;
    std::vector<Colour> colour_pattern;
};

std::string colour_pattern_str(const std::vector<Colour> &pattern);

/// Splits a state with one photon per listed path into |bins⟩⊗|colours⟩.
/// Throws NotColourSeparable if the colour sequence differs between kets.
ColourFactorization factor_colour(const StateVector &state, const std::vector<PathIndex> &paths);

struct HeraldSplit {
    BinRegisterState logical;
    BinString herald_bins;
};

/// Drops herald paths from a register. Every ket must carry the same herald
/// bins, otherwise NotColourSeparable is thrown (the logical state would be mixed).
HeraldSplit split_heralds(const BinRegisterState &reg, const std::vector<PathIndex> &herald_paths);

/// |⟨target|state⟩|². ArityMismatch if the path counts differ.
double fidelity(const BinRegisterState &state, const BinRegisterState &target);

/// a|00…0⟩ + b|11…1⟩ over paths 1..arity, normalized.
BinRegisterState ghz_target(Complex a, Complex b, std::size_t arity = 4);

/// a|001⟩ + b|010⟩ + c|100⟩ over paths 1, 2, 3, normalized.
BinRegisterState w_target(Complex a, Complex b, Complex c);

}  // namespace freqbin

#endif
