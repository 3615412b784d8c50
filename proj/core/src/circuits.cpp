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

#include "freqbin/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "freqbin/error.hpp"

using namespace freqbin;

namespace {

std::string path_str(PathIndex p) {
    return std::to_string(p);
}

std::vector<PathIndex> element_paths(const Element &element) {
    return std::visit(
        [](const auto &e) -> std::vector<PathIndex> {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, Demux>) {
                return {e.in, e.signal_out, e.idler_out};
            } else if constexpr (std::is_same_v<E, Filter>) {
                return {e.path};
            } else {
                return {e.path_a, e.path_b};
            }
        },
        element);
}

}  // namespace

std::vector<std::string> Circuit::problems() const {
    std::vector<std::string> out;
    if (sources.empty()) {
        out.push_back("circuit has no sources");
    }
    std::set<PathIndex> universe;
    std::set<PathIndex> source_paths;
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const auto &s = sources[k];
        std::string where = "source " + std::to_string(k + 1);
        try {
            s.source.validate();
        } catch (const SimulationError &e) {
            out.push_back(where + ": " + e.what());
        }
        if (s.max_pairs < 1 || s.max_pairs > 2) {
            out.push_back(where + ": max_pairs must be 1 or 2");
        }
        if (!source_paths.insert(s.path).second) {
            out.push_back(where + ": path " + path_str(s.path) + " already hosts a source");
        }
        universe.insert(s.path);
    }
    for (const auto &e : elements) {
        if (const auto *d = std::get_if<Demux>(&e)) {
            universe.insert(d->signal_out);
            universe.insert(d->idler_out);
        }
    }
    for (const auto &[path, req] : pattern.requirements) {
        universe.insert(path);
    }
    for (std::size_t k = 0; k < elements.size(); ++k) {
        std::string where = "element " + std::to_string(k + 1);
        const auto &e = elements[k];
        for (auto p : element_paths(e)) {
            if (!universe.count(p)) {
                out.push_back(where + ": path " + path_str(p) + " is not fed by any source, demux or detector");
            }
        }
        if (const auto *d = std::get_if<Demux>(&e); d && d->signal_out == d->idler_out) {
            out.push_back(where + ": demux signal and idler outputs must differ");
        }
        if (const auto *a = std::get_if<AddDrop>(&e); a && a->path_a == a->path_b) {
            out.push_back(where + ": add-drop paths must differ");
        }
        if (const auto *c = std::get_if<Coupler>(&e)) {
            if (c->path_a == c->path_b) {
                out.push_back(where + ": coupler paths must differ");
            }
            try {
                c->params.validate();
            } catch (const SimulationError &err) {
                out.push_back(where + ": " + err.what());
            }
        }
        if (const auto *f = std::get_if<Filter>(&e); f && !pattern.requirements.count(f->path)) {
            out.push_back(where + ": filter on path " + path_str(f->path) + " has no detector behind it");
        }
    }
    try {
        pattern.validate();
    } catch (const SimulationError &e) {
        out.push_back(std::string("detect: ") + e.what());
    }
    std::set<PathIndex> logical(logical_paths.begin(), logical_paths.end());
    std::set<PathIndex> herald(herald_paths.begin(), herald_paths.end());
    if (logical.size() != logical_paths.size()) {
        out.push_back("logical paths contain duplicates");
    }
    for (auto p : herald) {
        if (logical.count(p)) {
            out.push_back("path " + path_str(p) + " is both logical and herald");
        }
    }
    std::set<PathIndex> both = logical;
    both.insert(herald.begin(), herald.end());
    auto detected = pattern.paths();
    if (both != std::set<PathIndex>(detected.begin(), detected.end())) {
        out.push_back("logical and herald paths must together cover exactly the detected paths");
    }
    for (const auto &[path, req] : pattern.requirements) {
        if (req.count != 1) {
            out.push_back("detect: path " + path_str(path) + " must register exactly one photon for bin readout");
        }
    }
    if (target && target->paths.size() != logical_paths.size()) {
        out.push_back("target arity " + std::to_string(target->paths.size()) + " does not match " +
                      std::to_string(logical_paths.size()) + " logical paths");
    }
    if (!(rates.pair_prob > 0.0 && rates.pair_prob < 1.0)) {
        out.push_back("rates: pair_prob must lie in (0, 1)");
    }
    if (!(rates.rep_rate > 0.0)) {
        out.push_back("rates: rep_rate must be positive");
    }
    return out;
}

void Circuit::validate() const {
    auto list = problems();
    if (list.empty()) {
        return;
    }
    std::string msg = "invalid circuit '" + name + "':";
    for (const auto &p : list) {
        msg += "\n  " + p;
    }
    throw SimulationError(ErrorCode::InvalidArgument, msg);
}

DetectionPattern Circuit::effective_pattern() const {
    DetectionPattern p = pattern;
    for (const auto &e : elements) {
        const auto *f = std::get_if<Filter>(&e);
        if (!f) {
            continue;
        }
        auto it = p.requirements.find(f->path);
        if (it == p.requirements.end()) {
            throw SimulationError(ErrorCode::InvalidArgument,
                                  "filter on path " + path_str(f->path) + " has no detector behind it");
        }
        auto &c = it->second.constraint;
        if (!c) {
            c = f->pred;
            continue;
        }
        if ((c->colour && f->pred.colour && *c->colour != *f->pred.colour) ||
            (c->bin && f->pred.bin && *c->bin != *f->pred.bin)) {
            throw SimulationError(ErrorCode::ImpossiblePattern,
                                  "filter on path " + path_str(f->path) + " contradicts the detector constraint");
        }
        if (!c->colour) {
            c->colour = f->pred.colour;
        }
        if (!c->bin) {
            c->bin = f->pred.bin;
        }
    }
    return p;
}

RateEstimate freqbin::estimate_rates(double pair_prob, double rep_rate, double fraction) {
    if (!(pair_prob > 0.0 && pair_prob < 1.0)) {
        throw SimulationError(ErrorCode::InvalidArgument, "pair probability must lie in (0, 1)");
    }
    if (!(rep_rate > 0.0)) {
        throw SimulationError(ErrorCode::InvalidArgument, "repetition rate must be positive");
    }
    RateEstimate r;
    r.rep_rate = rep_rate;
    r.pair_prob_per_pulse = pair_prob;
    r.four_photon_rate = pair_prob * pair_prob * rep_rate;
    r.entangled_state_rate = fraction * r.four_photon_rate;
    return r;
}

Circuit freqbin::build_ghz_device(const std::array<Complex, 4> &beta, int max_pairs) {
    const Complex even = beta[0] * beta[2];
    const Complex odd = beta[1] * beta[3];
    if (even == Complex{0.0} && odd == Complex{0.0}) {
        throw SimulationError(ErrorCode::DegenerateSource, "beta1*beta3 and beta2*beta4 both vanish");
    }
    Circuit c;
    c.name = "ghz";
    c.sources.push_back({single_pump_source(beta[0], beta[1]).placed_on(1), 1, max_pairs});
    c.sources.push_back({single_pump_source(beta[2], beta[3]).placed_on(4), 4, max_pairs});
    c.sources[0].source.label = "A1";
    c.sources[1].source.label = "A2";
    c.elements.push_back(Demux{1, 1, 2});
    c.elements.push_back(Demux{4, 4, 3});
    c.elements.push_back(AddDrop{2, 3, ModePredicate{Colour::Idler, 1}});
    c.pattern = coincidence_pattern({1, 2, 3, 4});
    c.logical_paths = {1, 2, 3, 4};
    c.target = ghz_target(even, odd, 4);
    return c;
}

Circuit freqbin::build_w_device(Complex beta1, Complex beta2, const CouplerParams &coupler1,
                                const CouplerParams &coupler2) {
    coupler1.validate();
    coupler2.validate();
    Circuit c;
    c.name = "w";
    c.sources.push_back({dual_pump_source(beta1, beta2).placed_on(4), 4, 2});
    c.sources[0].source.label = "A";
    c.elements.push_back(Demux{4, 4, 2});
    c.elements.push_back(Coupler{1, 2, coupler1});
    c.elements.push_back(Coupler{3, 4, coupler2});
    c.elements.push_back(Filter{4, ModePredicate{Colour::Signal, 1}});
    c.pattern = coincidence_pattern({1, 2, 3, 4});
    c.logical_paths = {1, 2, 3};
    c.herald_paths = {4};
    const Complex a = 4.0 * beta2 * beta2;
    const Complex b = 2.0 * beta1 * beta2;
    if (a != Complex{0.0} || b != Complex{0.0}) {
        c.target = w_target(a, b, b);
    }
    return c;
}

StateVector freqbin::evolve(const Circuit &circuit) {
    StateVector state = StateVector::vacuum();
    for (const auto &placement : circuit.sources) {
        state = tensor_product(state, emit_state(placement.source.placed_on(placement.path), placement.max_pairs));
    }
    for (const auto &e : circuit.elements) {
        state = apply_element(state, e);
    }
    return state;
}

SimulationResult freqbin::run(const Circuit &circuit) {
    circuit.validate();
    const DetectionPattern pattern = circuit.effective_pattern();

    SimulationResult result;
    result.photon_number = pattern.total_photons();

    StateVector sector = project_photon_number(evolve(circuit), result.photon_number);
    if (sector.empty()) {
        throw SimulationError(ErrorCode::ZeroState, "sources never emit " + std::to_string(result.photon_number) +
                                                        " photons; raise max_pairs");
    }
    auto [normalized, weight] = normalize(sector);
    result.n_photon_probability = weight;

    PostSelection ps = postselect(normalized, pattern);
    if (!ps.state) {
        throw SimulationError(ErrorCode::ImpossiblePattern,
                              "detection pattern has probability below " + std::to_string(kProbabilityFloor));
    }
    result.coincidence_fraction = ps.probability;
    result.pattern_probability = weight * ps.probability;
    result.post_selected = *ps.state;

    std::vector<PathIndex> register_paths = circuit.logical_paths;
    register_paths.insert(register_paths.end(), circuit.herald_paths.begin(), circuit.herald_paths.end());
    ColourFactorization factored = factor_colour(result.post_selected, register_paths);
    result.colour_pattern = factored.colour_pattern;
    HeraldSplit split = split_heralds(factored.bins, circuit.herald_paths);
    result.bin_state = split.logical;
    result.herald_bins = split.herald_bins;
    if (circuit.target) {
        result.fidelity = fidelity(result.bin_state, *circuit.target);
    }
    // Exact colour factorization means the traced register is pure.
    result.purity = 1.0;
    result.rates = estimate_rates(circuit.rates.pair_prob, circuit.rates.rep_rate, result.coincidence_fraction);
    return result;
}

double freqbin::w_fraction_formula(Complex beta1, Complex beta2) {
    const double p1 = std::norm(beta1);
    const double p2 = std::norm(beta2);
    const double denom = p1 * p1 + p2 * p2 + p1 * p2;
    if (!(denom > 0.0)) {
        throw SimulationError(ErrorCode::DegenerateSource, "beta1 and beta2 both vanish");
    }
    return (2.0 * p2 * p2 + p1 * p2) / (8.0 * denom);
}

double freqbin::ghz_fraction_formula(const std::array<Complex, 4> &beta) {
    const double even = std::norm(beta[0] * beta[2]);
    const double odd = std::norm(beta[1] * beta[3]);
    const double cross = std::norm(beta[0] * beta[3]) + std::norm(beta[1] * beta[2]);
    if (!(even + odd > 0.0)) {
        throw SimulationError(ErrorCode::DegenerateSource, "beta1*beta3 and beta2*beta4 both vanish");
    }
    return (even + odd) / (even + odd + cross);
}

double freqbin::dual_pump_pair_of_pairs_norm_squared(Complex beta1, Complex beta2) {
    const double p1 = std::norm(beta1);
    const double p2 = std::norm(beta2);
    return 4.0 * p1 * p1 + 4.0 * p2 * p2 + 4.0 * p1 * p2;
}

double freqbin::w_herald_norm_squared(Complex beta1, Complex beta2) {
    const double p1 = std::norm(beta1);
    const double p2 = std::norm(beta2);
    return 16.0 * p2 * p2 + 8.0 * p1 * p2;
}
