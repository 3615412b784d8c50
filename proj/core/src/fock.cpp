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

#include "freqbin/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "freqbin/error.hpp"

using namespace freqbin;

char freqbin::colour_char(Colour c) {
    return c == Colour::Signal ? 'S' : 'I';
}

std::string ModeLabel::str() const {
    return std::to_string(path) + ":" + colour_char(colour) + ":" + std::to_string(bin);
}

FockBasisState::FockBasisState(std::vector<Entry> occupations) {
    std::sort(occupations.begin(), occupations.end(),
              [](const Entry &a, const Entry &b) { return a.first < b.first; });
    for (const auto &[mode, count] : occupations) {
        if (count == 0) {
            continue;
        }
        if (!occupations_.empty() && occupations_.back().first == mode) {
            occupations_.back().second += count;
        } else {
            occupations_.emplace_back(mode, count);
        }
    }
}

std::uint32_t FockBasisState::occupation(const ModeLabel &mode) const {
    auto it = std::lower_bound(occupations_.begin(), occupations_.end(), mode,
                               [](const Entry &e, const ModeLabel &m) { return e.first < m; });
    if (it != occupations_.end() && it->first == mode) {
        return it->second;
    }
    return 0;
}

std::uint32_t FockBasisState::total_photons() const {
    std::uint32_t total = 0;
    for (const auto &e : occupations_) {
        total += e.second;
    }
    return total;
}

std::uint32_t FockBasisState::photons_on_path(PathIndex path) const {
    std::uint32_t total = 0;
    for (const auto &[mode, count] : occupations_) {
        if (mode.path == path) {
            total += count;
        }
    }
    return total;
}

FockBasisState FockBasisState::with_added(const ModeLabel &mode, std::uint32_t delta) const {
    FockBasisState out = *this;
    if (delta == 0) {
        return out;
    }
    auto it = std::lower_bound(out.occupations_.begin(), out.occupations_.end(), mode,
                               [](const Entry &e, const ModeLabel &m) { return e.first < m; });
    if (it != out.occupations_.end() && it->first == mode) {
        it->second += delta;
    } else {
        out.occupations_.insert(it, Entry{mode, delta});
    }
    return out;
}

std::string FockBasisState::str() const {
    if (occupations_.empty()) {
        return "vac";
    }
    std::string out;
    for (const auto &[mode, count] : occupations_) {
        if (!out.empty()) {
            out += ',';
        }
        out += mode.str();
        out += '^';
        out += std::to_string(count);
    }
    return out;
}

StateVector::StateVector(double prune_tolerance) : prune_tolerance_(prune_tolerance) {
    if (!(prune_tolerance >= 0.0)) {
        throw SimulationError(ErrorCode::InvalidArgument, "prune tolerance must be non-negative");
    }
}

StateVector StateVector::vacuum(double prune_tolerance) {
    return basis(FockBasisState{}, 1.0, prune_tolerance);
}

StateVector StateVector::basis(const FockBasisState &ket, Complex amplitude, double prune_tolerance) {
    StateVector s(prune_tolerance);
    s.add(ket, amplitude);
    return s;
}

void StateVector::add(const FockBasisState &ket, Complex amplitude) {
    auto [it, inserted] = terms_.try_emplace(ket, amplitude);
    if (!inserted) {
        it->second += amplitude;
    }
    if (std::abs(it->second) <= prune_tolerance_) {
        terms_.erase(it);
    }
}

Complex StateVector::amplitude(const FockBasisState &ket) const {
    auto it = terms_.find(ket);
    return it == terms_.end() ? Complex{0.0} : it->second;
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto &[ket, amp] : terms_) {
        total += std::norm(amp);
    }
    return total;
}

bool StateVector::is_normalized() const {
    return std::abs(std::sqrt(norm_squared()) - 1.0) < kNormalizedTolerance;
}

std::set<ModeLabel> StateVector::support() const {
    std::set<ModeLabel> modes;
    for (const auto &[ket, amp] : terms_) {
        for (const auto &e : ket.entries()) {
            modes.insert(e.first);
        }
    }
    return modes;
}

StateVector StateVector::scaled(Complex factor) const {
    StateVector out(prune_tolerance_);
    for (const auto &[ket, amp] : terms_) {
        out.add(ket, amp * factor);
    }
    return out;
}

StateVector &StateVector::operator+=(const StateVector &other) {
    for (const auto &[ket, amp] : other.terms_) {
        add(ket, amp);
    }
    return *this;
}

std::string StateVector::str() const {
    std::string out;
    char buf[96];
    for (const auto &[ket, amp] : terms_) {
        std::snprintf(buf, sizeof(buf), "%+.12e%+.12ei  ", amp.real(), amp.imag());
        out += buf;
        out += ket.str();
        out += '\n';
    }
    return out;
}

StateVector freqbin::operator+(StateVector a, const StateVector &b) {
    a += b;
    return a;
}

StateVector freqbin::apply_creation(const StateVector &state, const ModeLabel &mode) {
    StateVector out(state.prune_tolerance());
    for (const auto &[ket, amp] : state.terms()) {
        double n = ket.occupation(mode);
        out.add(ket.with_added(mode), amp * std::sqrt(n + 1.0));
    }
    return out;
}

Complex freqbin::inner_product(const StateVector &a, const StateVector &b) {
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    Complex total{0.0};
    for (const auto &[ket, amp] : small.terms()) {
        auto other = large.amplitude(ket);
        if (&small == &a) {
            total += std::conj(amp) * other;
        } else {
            total += std::conj(other) * amp;
        }
    }
    return total;
}

StateVector freqbin::project_photon_number(const StateVector &state, std::uint32_t n) {
    StateVector out(state.prune_tolerance());
    for (const auto &[ket, amp] : state.terms()) {
        if (ket.total_photons() == n) {
            out.add(ket, amp);
        }
    }
    return out;
}

Normalized freqbin::normalize(const StateVector &state) {
    double n2 = state.norm_squared();
    double tol = state.prune_tolerance();
    if (!(n2 > tol * tol) || n2 == 0.0) {
        throw SimulationError(ErrorCode::ZeroState, "cannot normalize a zero state");
    }
    return {state.scaled(1.0 / std::sqrt(n2)), n2};
}
