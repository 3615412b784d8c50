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

#include "freqbin/elements.hpp"

#include <cmath>

#include "freqbin/error.hpp"

using namespace freqbin;

bool ModePredicate::matches(const ModeLabel &mode) const {
    if (colour && *colour != mode.colour) {
        return false;
    }
    if (bin && *bin != mode.bin) {
        return false;
    }
    return true;
}

std::string ModePredicate::str() const {
    std::string out;
    if (colour) {
        out += colour_char(*colour);
    } else {
        out += '*';
    }
    out += ' ';
    out += bin ? std::to_string(*bin) : std::string("*");
    return out;
}

CouplerParams CouplerParams::balanced() {
    return {Complex{1.0 / std::sqrt(2.0), 0.0}, Complex{0.0, 1.0 / std::sqrt(2.0)}};
}

CouplerParams CouplerParams::from_theta(double theta) {
    return {Complex{std::cos(theta), 0.0}, Complex{0.0, std::sin(theta)}};
}

void CouplerParams::validate() const {
    constexpr double tol = 1e-12;
    double energy = std::norm(transmission) + std::norm(reflection);
    if (std::abs(energy - 1.0) > tol) {
        throw SimulationError(ErrorCode::NonUnitaryCoupler,
                              "|T|^2 + |R|^2 = " + std::to_string(energy) + ", expected 1");
    }
    Complex cross = transmission * std::conj(reflection) + reflection * std::conj(transmission);
    if (std::abs(cross) > tol) {
        throw SimulationError(ErrorCode::NonUnitaryCoupler,
                              "T R* + R T* = " + std::to_string(cross.real()) + ", expected 0");
    }
}

StateVector freqbin::apply_demux(const StateVector &state, PathIndex path_in, PathIndex path_signal,
                                 PathIndex path_idler) {
    if (path_signal == path_idler) {
        throw SimulationError(ErrorCode::InvalidArgument, "demux signal and idler outputs must differ");
    }
    StateVector out(state.prune_tolerance());
    for (const auto &[ket, amp] : state.terms()) {
        std::vector<FockBasisState::Entry> kept;
        std::vector<FockBasisState::Entry> moved;
        for (auto [mode, count] : ket.entries()) {
            if (mode.path == path_in) {
                mode.path = mode.colour == Colour::Signal ? path_signal : path_idler;
                moved.emplace_back(mode, count);
            } else {
                kept.emplace_back(mode, count);
            }
        }
        FockBasisState rest(kept);
        for (const auto &[mode, count] : moved) {
            if (rest.occupation(mode) != 0) {
                throw SimulationError(ErrorCode::ModeCollision,
                                      "demux from path " + std::to_string(path_in) + " merges onto occupied mode " +
                                          mode.str());
            }
        }
        kept.insert(kept.end(), moved.begin(), moved.end());
        out.add(FockBasisState(std::move(kept)), amp);
    }
    return out;
}

StateVector freqbin::apply_adddrop_swap(const StateVector &state, PathIndex path_a, PathIndex path_b,
                                        const ModePredicate &pred) {
    if (path_a == path_b) {
        throw SimulationError(ErrorCode::InvalidArgument, "add-drop paths must differ");
    }
    StateVector out(state.prune_tolerance());
    for (const auto &[ket, amp] : state.terms()) {
        std::vector<FockBasisState::Entry> entries = ket.entries();
        for (auto &[mode, count] : entries) {
            if (!pred.matches(mode)) {
                continue;
            }
            if (mode.path == path_a) {
                mode.path = path_b;
            } else if (mode.path == path_b) {
                mode.path = path_a;
            }
        }
        out.add(FockBasisState(std::move(entries)), amp);
    }
    return out;
}

StateVector freqbin::apply_directional_coupler(const StateVector &state, PathIndex path_a, PathIndex path_b,
                                               const CouplerParams &params) {
    if (path_a == path_b) {
        throw SimulationError(ErrorCode::InvalidArgument, "coupler paths must differ");
    }
    params.validate();
    const Complex t = params.transmission;
    const Complex r = params.reflection;

    StateVector out(state.prune_tolerance());
    for (const auto &[ket, amp] : state.terms()) {
        // Rebuild the ket as a creation monomial on the untouched modes, then
        // apply the substituted operators one photon at a time.
        std::vector<FockBasisState::Entry> untouched;
        std::vector<FockBasisState::Entry> mixed;
        double inv_norm = 1.0;
        for (const auto &e : ket.entries()) {
            if (e.first.path == path_a || e.first.path == path_b) {
                mixed.push_back(e);
                inv_norm /= std::sqrt(std::tgamma(e.second + 1.0));
            } else {
                untouched.push_back(e);
            }
        }
        StateVector partial = StateVector::basis(FockBasisState(std::move(untouched)), amp * inv_norm,
                                                 state.prune_tolerance());
        for (const auto &[mode, count] : mixed) {
            ModeLabel same = mode;
            ModeLabel other = mode;
            other.path = mode.path == path_a ? path_b : path_a;
            ModeLabel on_a = mode.path == path_a ? same : other;
            ModeLabel on_b = mode.path == path_a ? other : same;
            // a†_a -> T a†_a + R a†_b ; a†_b -> R a†_a + T a†_b
            Complex coeff_a = mode.path == path_a ? t : r;
            Complex coeff_b = mode.path == path_a ? r : t;
            for (std::uint32_t k = 0; k < count; ++k) {
                partial = apply_creation(partial, on_a).scaled(coeff_a) + apply_creation(partial, on_b).scaled(coeff_b);
            }
        }
        out += partial;
    }
    return out;
}

StateVector freqbin::apply_element(const StateVector &state, const Element &element) {
    return std::visit(
        [&](const auto &e) -> StateVector {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, Demux>) {
                return apply_demux(state, e.in, e.signal_out, e.idler_out);
            } else if constexpr (std::is_same_v<E, AddDrop>) {
                return apply_adddrop_swap(state, e.path_a, e.path_b, e.pred);
            } else if constexpr (std::is_same_v<E, Coupler>) {
                return apply_directional_coupler(state, e.path_a, e.path_b, e.params);
            } else {
                return state;
            }
        },
        element);
}
