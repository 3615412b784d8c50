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

#ifndef FREQBIN_FOCK_HPP
#define FREQBIN_FOCK_HPP

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace freqbin {

using Complex = std::complex<double>;
using PathIndex = std::uint32_t;
using BinIndex = std::uint32_t;

enum class Colour : std::uint8_t { Signal, Idler };

char colour_char(Colour c);

/// A single photonic mode: waveguide path, signal/idler colour, frequency bin.
/// Ordering is lexicographic on (path, colour, bin) and fixes the canonical
/// serialization of basis kets.
struct ModeLabel {
    PathIndex path = 0;
    Colour colour = Colour::Signal;
    BinIndex bin = 0;

    auto operator<=>(const ModeLabel &) const = default;
    bool operator==(const ModeLabel &) const = default;

    /// `path:colour:bin`, e.g. `1:S:0`.
    std::string str() const;
};

inline ModeLabel signal_mode(PathIndex path, BinIndex bin) {
    return {path, Colour::Signal, bin};
}
inline ModeLabel idler_mode(PathIndex path, BinIndex bin) {
    return {path, Colour::Idler, bin};
}

/// Occupation-number ket. Entries are kept sorted by mode and never hold a
/// zero count, so structural equality is canonical equality.
class FockBasisState {
   public:
    using Entry = std::pair<ModeLabel, std::uint32_t>;

    FockBasisState() = default;
    explicit FockBasisState(std::vector<Entry> occupations);

    std::uint32_t occupation(const ModeLabel &mode) const;
    std::uint32_t total_photons() const;
    std::uint32_t photons_on_path(PathIndex path) const;

    /// Copy with `delta` extra photons in `mode`.
    FockBasisState with_added(const ModeLabel &mode, std::uint32_t delta = 1) const;

    const std::vector<Entry> &entries() const {
        return occupations_;
    }
    bool is_vacuum() const {
        return occupations_.empty();
    }

    /// Canonical text form: `path:colour:bin^n` fragments joined by `,`.
    /// The vacuum serializes as `vac`.
    std::string str() const;

    auto operator<=>(const FockBasisState &) const = default;
    bool operator==(const FockBasisState &) const = default;

   private:
    std::vector<Entry> occupations_;
};

inline constexpr double kDefaultPruneTolerance = 1e-14;
inline constexpr double kNormalizedTolerance = 1e-12;

/// Sparse superposition of Fock kets. Amplitudes at or below the prune
/// tolerance are never stored. Keys iterate in canonical ket order.
class StateVector {
   public:
    using Terms = std::map<FockBasisState, Complex>;

    explicit StateVector(double prune_tolerance = kDefaultPruneTolerance);

    static StateVector vacuum(double prune_tolerance = kDefaultPruneTolerance);
    static StateVector basis(const FockBasisState &ket, Complex amplitude = 1.0,
                             double prune_tolerance = kDefaultPruneTolerance);

    /// Accumulates `amplitude` onto `ket`, dropping the entry if the sum falls
    /// to the prune tolerance.
    void add(const FockBasisState &ket, Complex amplitude);

    Complex amplitude(const FockBasisState &ket) const;
    const Terms &terms() const {
        return terms_;
    }
    std::size_t size() const {
        return terms_.size();
    }
    bool empty() const {
        return terms_.empty();
    }
    double prune_tolerance() const {
        return prune_tolerance_;
    }

    double norm_squared() const;
    bool is_normalized() const;

    /// Every mode with nonzero occupation in at least one ket.
    std::set<ModeLabel> support() const;

    StateVector scaled(Complex factor) const;
    StateVector &operator+=(const StateVector &other);

    /// Multi-line canonical dump: one `amplitude  ket` line per term.
    std::string str() const;

    bool operator==(const StateVector &other) const {
        return terms_ == other.terms_;
    }

   private:
    Terms terms_;
    double prune_tolerance_;
};

StateVector operator+(StateVector a, const StateVector &b);

/// a†_mode applied to every ket: |n⟩ -> √(n+1)|n+1⟩. Not renormalized.
StateVector apply_creation(const StateVector &state, const ModeLabel &mode);

/// ⟨a|b⟩, conjugate-linear in `a`.
Complex inner_product(const StateVector &a, const StateVector &b);

/// Keeps exactly the kets carrying `n` photons. Not renormalized.
StateVector project_photon_number(const StateVector &state, std::uint32_t n);

struct Normalized {
    StateVector state;
    double norm_squared;
};

/// Throws SimulationError(ZeroState) when norm² is at or below tolerance².
Normalized normalize(const StateVector &state);

}  // namespace freqbin

#endif
