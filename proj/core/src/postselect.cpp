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

#include "freqbin/postselect.hpp"

#include <algorithm>
#include <cmath>

#include "freqbin/error.hpp"

using namespace freqbin;

void DetectionPattern::validate() const {
    if (requirements.empty()) {
        throw SimulationError(ErrorCode::InvalidArgument, "detection pattern lists no paths");
    }
    for (const auto &[path, req] : requirements) {
        if (req.count < 1) {
            throw SimulationError(ErrorCode::InvalidArgument,
                                  "detection pattern path " + std::to_string(path) + " requires zero photons");
        }
    }
}

bool DetectionPattern::matches(const FockBasisState &ket) const {
    std::map<PathIndex, std::uint32_t> seen;
    for (const auto &[mode, count] : ket.entries()) {
        auto it = requirements.find(mode.path);
        if (it == requirements.end()) {
            if (exclusive) {
                return false;
            }
            continue;
        }
        if (it->second.constraint && !it->second.constraint->matches(mode)) {
            return false;
        }
        seen[mode.path] += count;
    }
    for (const auto &[path, req] : requirements) {
        auto it = seen.find(path);
        if (it == seen.end() || it->second != req.count) {
            return false;
        }
    }
    return true;
}

std::uint32_t DetectionPattern::total_photons() const {
    std::uint32_t total = 0;
    for (const auto &[path, req] : requirements) {
        total += req.count;
    }
    return total;
}

std::vector<PathIndex> DetectionPattern::paths() const {
    std::vector<PathIndex> out;
    for (const auto &[path, req] : requirements) {
        out.push_back(path);
    }
    return out;
}

DetectionPattern freqbin::coincidence_pattern(const std::vector<PathIndex> &paths) {
    DetectionPattern p;
    for (auto path : paths) {
        p.requirements[path] = PathRequirement{1, std::nullopt};
    }
    p.exclusive = true;
    return p;
}

std::string freqbin::bin_string_str(const BinString &bins) {
    bool wide = std::any_of(bins.begin(), bins.end(), [](BinIndex b) { return b > 9; });
    std::string out;
    for (std::size_t k = 0; k < bins.size(); ++k) {
        if (wide && k > 0) {
            out += '.';
        }
        out += std::to_string(bins[k]);
    }
    return out;
}

double BinRegisterState::norm_squared() const {
    double total = 0.0;
    for (const auto &[bins, amp] : amplitudes) {
        total += std::norm(amp);
    }
    return total;
}

Complex BinRegisterState::amplitude(const BinString &bins) const {
    auto it = amplitudes.find(bins);
    return it == amplitudes.end() ? Complex{0.0} : it->second;
}

BinRegisterState freqbin::make_register(std::vector<PathIndex> paths, std::map<BinString, Complex> amplitudes) {
    BinRegisterState reg;
    reg.paths = std::move(paths);
    double n2 = 0.0;
    for (const auto &[bins, amp] : amplitudes) {
        if (bins.size() != reg.paths.size()) {
            throw SimulationError(ErrorCode::ArityMismatch, "bin string '" + bin_string_str(bins) +
                                                                "' does not match register arity " +
                                                                std::to_string(reg.paths.size()));
        }
        n2 += std::norm(amp);
    }
    if (!(n2 > kProbabilityFloor)) {
        throw SimulationError(ErrorCode::ZeroState, "register amplitudes are all zero");
    }
    // Already-normalized input is stored untouched so reparsing is exact.
    double scale = std::abs(n2 - 1.0) <= 1e-14 ? 1.0 : 1.0 / std::sqrt(n2);
    for (const auto &[bins, amp] : amplitudes) {
        if (amp != Complex{0.0}) {
            reg.amplitudes[bins] = amp * scale;
        }
    }
    return reg;
}

StateVector freqbin::project_pattern(const StateVector &state, const DetectionPattern &pattern) {
    StateVector out(state.prune_tolerance());
    for (const auto &[ket, amp] : state.terms()) {
        if (pattern.matches(ket)) {
            out.add(ket, amp);
        }
    }
    return out;
}

PostSelection freqbin::postselect(const StateVector &state, const DetectionPattern &pattern) {
    pattern.validate();
    StateVector projected = project_pattern(state, pattern);
    double p = projected.norm_squared();
    if (p < kProbabilityFloor) {
        return {std::nullopt, 0.0};
    }
    return {projected.scaled(1.0 / std::sqrt(p)), p};
}

std::string freqbin::colour_pattern_str(const std::vector<Colour> &pattern) {
    std::string out;
    for (std::size_t k = 0; k < pattern.size(); ++k) {
        if (k > 0) {
            out += ',';
        }
        out += colour_char(pattern[k]);
    }
    return out;
}

ColourFactorization freqbin::factor_colour(const StateVector &state, const std::vector<PathIndex> &paths) {
    if (state.empty()) {
        throw SimulationError(ErrorCode::ZeroState, "cannot factor colour of an empty state");
    }
    std::optional<std::vector<Colour>> colours;
    std::map<BinString, Complex> amplitudes;
    for (const auto &[ket, amp] : state.terms()) {
        if (ket.total_photons() != paths.size()) {
            throw SimulationError(ErrorCode::InvalidArgument,
                                  "ket " + ket.str() + " does not carry exactly one photon per register path");
        }
        std::vector<Colour> ket_colours;
        BinString bins;
        for (auto path : paths) {
            const ModeLabel *found = nullptr;
            for (const auto &[mode, count] : ket.entries()) {
                if (mode.path == path) {
                    if (count != 1 || found) {
                        throw SimulationError(ErrorCode::InvalidArgument,
                                              "ket " + ket.str() + " has more than one photon on path " +
                                                  std::to_string(path));
                    }
                    found = &mode;
                }
            }
            if (!found) {
                throw SimulationError(ErrorCode::InvalidArgument,
                                      "ket " + ket.str() + " has no photon on path " + std::to_string(path));
            }
            ket_colours.push_back(found->colour);
            bins.push_back(found->bin);
        }
        if (!colours) {
            colours = ket_colours;
        } else if (*colours != ket_colours) {
            throw SimulationError(ErrorCode::NotColourSeparable,
                                  "colour patterns " + colour_pattern_str(*colours) + " and " +
                                      colour_pattern_str(ket_colours) + " both occur; tracing colour leaves a mixed state");
        }
        amplitudes[bins] += amp;
    }
    return {make_register(paths, std::move(amplitudes)), *colours};
}

HeraldSplit freqbin::split_heralds(const BinRegisterState &reg, const std::vector<PathIndex> &herald_paths) {
    std::vector<std::size_t> keep_idx;
    std::vector<std::size_t> herald_idx;
    std::vector<PathIndex> kept_paths;
    for (std::size_t k = 0; k < reg.paths.size(); ++k) {
        bool herald = std::find(herald_paths.begin(), herald_paths.end(), reg.paths[k]) != herald_paths.end();
        if (herald) {
            herald_idx.push_back(k);
        } else {
            keep_idx.push_back(k);
            kept_paths.push_back(reg.paths[k]);
        }
    }
    if (herald_idx.size() != herald_paths.size()) {
        throw SimulationError(ErrorCode::ArityMismatch, "herald path missing from the register");
    }
    std::optional<BinString> herald_bins;
    std::map<BinString, Complex> logical;
    for (const auto &[bins, amp] : reg.amplitudes) {
        BinString h;
        BinString l;
        for (auto k : herald_idx) {
            h.push_back(bins[k]);
        }
        for (auto k : keep_idx) {
            l.push_back(bins[k]);
        }
        if (!herald_bins) {
            herald_bins = h;
        } else if (*herald_bins != h) {
            throw SimulationError(ErrorCode::NotColourSeparable,
                                  "herald bins vary across branches; the logical register is entangled with the herald");
        }
        logical[l] += amp;
    }
    return {make_register(std::move(kept_paths), std::move(logical)), herald_bins.value_or(BinString{})};
}

double freqbin::fidelity(const BinRegisterState &state, const BinRegisterState &target) {
    if (state.paths.size() != target.paths.size()) {
        throw SimulationError(ErrorCode::ArityMismatch, "register arities " + std::to_string(state.paths.size()) +
                                                            " and " + std::to_string(target.paths.size()) + " differ");
    }
    Complex overlap{0.0};
    for (const auto &[bins, amp] : target.amplitudes) {
        overlap += std::conj(amp) * state.amplitude(bins);
    }
    double f = std::norm(overlap) / (state.norm_squared() * target.norm_squared());
    return std::clamp(f, 0.0, 1.0);
}

BinRegisterState freqbin::ghz_target(Complex a, Complex b, std::size_t arity) {
    if (arity == 0) {
        throw SimulationError(ErrorCode::InvalidArgument, "GHZ arity must be positive");
    }
    std::vector<PathIndex> paths;
    for (std::size_t k = 1; k <= arity; ++k) {
        paths.push_back(static_cast<PathIndex>(k));
    }
    return make_register(paths, {{BinString(arity, 0), a}, {BinString(arity, 1), b}});
}

BinRegisterState freqbin::w_target(Complex a, Complex b, Complex c) {
    return make_register({1, 2, 3}, {{{0, 0, 1}, a}, {{0, 1, 0}, b}, {{1, 0, 0}, c}});
}
