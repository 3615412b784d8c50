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

#include "freqbin/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include "freqbin/circuits.hpp"
#include "freqbin/error.hpp"

using namespace freqbin;
using namespace freqbin::acceptance;

namespace {

constexpr double kTol = 1e-12;

std::string fmt(const char *f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), f, a);
    return buf;
}

std::string fmt(const char *f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b);
    return buf;
}

template <typename Fn>
CriterionResult guarded(std::string id, std::string title, Fn body) {
    CriterionResult r{std::move(id), std::move(title), false, ""};
    try {
        body(r);
    } catch (const std::exception &e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    return r;
}

// Histogram of (colour, bin) over all photons in a ket.
std::map<std::pair<Colour, BinIndex>, std::uint32_t> colour_bin_histogram(const FockBasisState &ket) {
    std::map<std::pair<Colour, BinIndex>, std::uint32_t> h;
    for (const auto &[mode, count] : ket.entries()) {
        h[{mode.colour, mode.bin}] += count;
    }
    return h;
}

StateVector random_sparse_state(std::mt19937_64 &rng, const std::vector<PathIndex> &paths) {
    std::uniform_int_distribution<int> n_terms(1, 6);
    std::uniform_int_distribution<int> n_photons(0, 4);
    std::uniform_int_distribution<std::size_t> pick_path(0, paths.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    StateVector s;
    int terms = n_terms(rng);
    for (int k = 0; k < terms; ++k) {
        std::vector<FockBasisState::Entry> entries;
        int photons = n_photons(rng);
        for (int p = 0; p < photons; ++p) {
            ModeLabel m{paths[pick_path(rng)], coin(rng) ? Colour::Signal : Colour::Idler,
                        static_cast<BinIndex>(coin(rng))};
            entries.emplace_back(m, 1);
        }
        s.add(FockBasisState(std::move(entries)), Complex{gauss(rng), gauss(rng)});
    }
    if (s.empty()) {
        s = StateVector::vacuum();
    }
    return normalize(s).state;
}

Circuit bell_circuit(bool dual, Complex beta1, Complex beta2, double phi) {
    Circuit c;
    c.name = dual ? "bell_dual_pump" : "bell_single_pump";
    SourceSpec s = dual ? dual_pump_source(beta1, beta2) : single_pump_source(beta1, beta2);
    c.sources.push_back({s.placed_on(1), 1, 1});
    c.elements.push_back(Demux{1, 1, 2});
    c.pattern = coincidence_pattern({1, 2});
    c.logical_paths = {1, 2};
    const Complex phase = std::polar(1.0, phi);
    if (dual) {
        c.target = make_register({1, 2}, {{{0, 1}, 1.0}, {{1, 0}, phase}});
    } else {
        c.target = ghz_target(1.0, phase, 2);
    }
    return c;
}

}  // namespace

CriterionResult acceptance::ghz_state_and_fraction() {
    return guarded("AC-1", "GHZ state and coincidence fraction", [](CriterionResult &r) {
        const Complex b{0.1};
        SimulationResult res = run(build_ghz_device({b, b, b, b}));
        const double f = fidelity(res.bin_state, ghz_target(1.0, 1.0, 4));
        const std::string colours = colour_pattern_str(res.colour_pattern);
        r.passed = std::abs(f - 1.0) <= kTol && colours == "S,I,I,S" &&
                   std::abs(res.coincidence_fraction - 0.5) <= kTol;
        r.detail = fmt("fidelity=%.15f fraction=%.15f", f, res.coincidence_fraction) + " colours=" + colours;
    });
}

CriterionResult acceptance::w_state_and_fraction() {
    return guarded("AC-2", "W state and coincidence fraction", [](CriterionResult &r) {
        SimulationResult res = run(build_w_device(0.2, 0.1));
        const double f = fidelity(res.bin_state, w_target(1.0, 1.0, 1.0));
        r.passed = std::abs(f - 1.0) <= kTol && std::abs(res.coincidence_fraction - 1.0 / 28.0) <= kTol &&
                   res.herald_bins == BinString{1};
        r.detail = fmt("fidelity=%.15f fraction=%.15f", f, res.coincidence_fraction) +
                   fmt(" (1/28=%.15f)", 1.0 / 28.0) + " colours=" + colour_pattern_str(res.colour_pattern);
    });
}

CriterionResult acceptance::w_fraction_formula_equivalence() {
    return guarded("AC-3", "W fraction matches closed form on 5x5x4 grid", [](CriterionResult &r) {
        const double lo = std::log(0.01);
        const double hi = std::log(0.3);
        double worst = 0.0;
        int points = 0;
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                for (int k = 0; k < 4; ++k) {
                    const double m1 = std::exp(lo + (hi - lo) * i / 4.0);
                    const double m2 = std::exp(lo + (hi - lo) * j / 4.0);
                    const Complex beta1{m1};
                    const Complex beta2 = std::polar(m2, k * std::numbers::pi / 2.0);
                    const double sim = run(build_w_device(beta1, beta2)).coincidence_fraction;
                    worst = std::max(worst, std::abs(sim - w_fraction_formula(beta1, beta2)));
                    ++points;
                }
            }
        }
        r.passed = points == 100 && worst <= kTol;
        r.detail = fmt("points=%.0f max|sim-formula|=%.3e", points, worst);
    });
}

CriterionResult acceptance::normalization_constants() {
    return guarded("AC-4", "pair-of-pairs and heralded normalization constants", [](CriterionResult &r) {
        std::mt19937_64 rng(0x5eed0004);
        std::uniform_real_distribution<double> mag(0.01, 0.3);
        std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
        double worst_source = 0.0;
        double worst_emit = 0.0;
        double worst_herald = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const Complex beta1 = std::polar(mag(rng), ph(rng));
            const Complex beta2 = std::polar(mag(rng), ph(rng));
            const SourceSpec src = dual_pump_source(beta1, beta2).placed_on(4);

            const StateVector pairs2 = pair_operator_power(src, 2);
            const double expected = dual_pump_pair_of_pairs_norm_squared(beta1, beta2);
            worst_source = std::max(worst_source, std::abs(pairs2.norm_squared() - expected) / expected);

            // emit_state carries the 1/2! weight on the same four-photon sector.
            const double emitted = project_photon_number(emit_state(src, 2), 4).norm_squared();
            worst_emit = std::max(worst_emit, std::abs(4.0 * emitted - expected) / expected);

            Circuit w = build_w_device(beta1, beta2);
            StateVector evolved = pairs2;
            for (const auto &e : w.elements) {
                evolved = apply_element(evolved, e);
            }
            const double herald = project_pattern(evolved, w.effective_pattern()).norm_squared();
            const auto bs = CouplerParams::balanced();
            const double rt = std::norm(bs.reflection * bs.transmission * bs.reflection * bs.transmission);
            const double expected_herald = w_herald_norm_squared(beta1, beta2);
            worst_herald = std::max(worst_herald, std::abs(herald / rt - expected_herald) / expected_herald);
        }
        r.passed = worst_source <= kTol && worst_emit <= kTol && worst_herald <= kTol;
        r.detail = fmt("max rel err: source=%.3e emit=%.3e", worst_source, worst_emit) +
                   fmt(" herald=%.3e", worst_herald);
    });
}

CriterionResult acceptance::element_unitarity_suite() {
    return guarded("AC-5", "element unitarity and conservation on 100 random states", [](CriterionResult &r) {
        std::mt19937_64 rng(0x5eed0005);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::uniform_int_distribution<int> coin(0, 2);
        double worst_norm = 0.0;
        bool conserved = true;
        bool involution = true;
        for (int trial = 0; trial < 100; ++trial) {
            const StateVector s = random_sparse_state(rng, {1, 2, 3});
            ModePredicate pred;
            int c = coin(rng);
            if (c == 1) {
                pred.colour = Colour::Idler;
            } else if (c == 2) {
                pred.colour = Colour::Signal;
            }
            if (coin(rng) > 0) {
                pred.bin = static_cast<BinIndex>(coin(rng) % 2);
            }
            const double theta = angle(rng);
            const Complex global = std::polar(1.0, angle(rng));
            const CouplerParams params{std::cos(theta) * global, Complex{0.0, std::sin(theta)} * global};
            const std::vector<Element> elements = {Demux{1, 1, 4}, AddDrop{2, 3, pred}, Coupler{1, 2, params},
                                                   Coupler{2, 3, CouplerParams::balanced()}};
            for (const auto &e : elements) {
                const StateVector out = apply_element(s, e);
                worst_norm = std::max(worst_norm, std::abs(out.norm_squared() - 1.0));
                for (const auto &[ket, amp] : s.terms()) {
                    const auto single = apply_element(StateVector::basis(ket), e);
                    for (const auto &[out_ket, out_amp] : single.terms()) {
                        if (out_ket.total_photons() != ket.total_photons() ||
                            colour_bin_histogram(out_ket) != colour_bin_histogram(ket)) {
                            conserved = false;
                        }
                    }
                }
            }
            if (apply_adddrop_swap(apply_adddrop_swap(s, 2, 3, pred), 2, 3, pred) != s) {
                involution = false;
            }
        }
        const ModeLabel a{1, Colour::Signal, 0};
        const ModeLabel b{2, Colour::Signal, 0};
        const FockBasisState both({{a, 1}, {b, 1}});
        const StateVector hom = apply_directional_coupler(StateVector::basis(both), 1, 2, CouplerParams::balanced());
        const double hom_amp = std::abs(hom.amplitude(both));
        r.passed = worst_norm <= kTol && conserved && involution && hom_amp < kTol;
        r.detail = fmt("max|norm^2-1|=%.3e HOM|T^2+R^2|=%.3e", worst_norm, hom_amp) +
                   (conserved ? " conservation=exact" : " conservation=VIOLATED") +
                   (involution ? " involution=exact" : " involution=VIOLATED");
    });
}

CriterionResult acceptance::ghz_same_source_exclusion() {
    return guarded("AC-6", "GHZ same-source double pairs never give four-fold coincidences", [](CriterionResult &r) {
        double worst = 0.0;
        bool fidelity_ok = true;
        const std::array<std::array<Complex, 4>, 2> configs = {
            std::array<Complex, 4>{0.1, 0.1, 0.1, 0.1},
            std::array<Complex, 4>{0.2, std::polar(0.05, 0.7), 0.13, std::polar(0.3, -1.1)}};
        for (const auto &beta : configs) {
            Circuit ghz = build_ghz_device(beta, 2);
            const StateVector e1 = emit_state(ghz.sources[0].source, 2);
            const StateVector e2 = emit_state(ghz.sources[1].source, 2);
            StateVector single = tensor_product(project_photon_number(e1, 4), project_photon_number(e2, 0)) +
                                 tensor_product(project_photon_number(e1, 0), project_photon_number(e2, 4));
            for (const auto &e : ghz.elements) {
                single = apply_element(single, e);
            }
            worst = std::max(worst, project_pattern(single, ghz.pattern).norm_squared());
            SimulationResult res = run(ghz);
            fidelity_ok = fidelity_ok && std::abs(*res.fidelity - 1.0) <= kTol;
        }
        r.passed = worst <= kProbabilityFloor && fidelity_ok;
        r.detail = fmt("single-source coincidence probability=%.3e", worst) +
                   (fidelity_ok ? " fidelity(max_pairs=2)=1" : " fidelity(max_pairs=2)!=1");
    });
}

CriterionResult acceptance::rate_orders_of_magnitude() {
    return guarded("AC-7", "GHZ and W generation rates", [](CriterionResult &r) {
        const Complex b{0.1};
        const double ghz_fraction = run(build_ghz_device({b, b, b, b})).coincidence_fraction;
        const double w_fraction = run(build_w_device(0.2, 0.1)).coincidence_fraction;
        const RateEstimate ghz = estimate_rates(0.1, 1e6, ghz_fraction);
        const RateEstimate w = estimate_rates(0.1, 1e6, w_fraction);
        r.passed = ghz.entangled_state_rate >= 1e3 && ghz.entangled_state_rate <= 1e5 &&
                   w.entangled_state_rate >= 1e2 && w.entangled_state_rate <= 1e4 &&
                   ghz.entangled_state_rate == ghz.four_photon_rate * ghz_fraction;
        r.detail = fmt("R_IV=%.6g Hz GHZ=%.6g Hz", ghz.four_photon_rate, ghz.entangled_state_rate) +
                   fmt(" W=%.6g Hz", w.entangled_state_rate);
    });
}

CriterionResult acceptance::bell_first_order_limits() {
    return guarded("AC-9", "first-order Bell states from both pump schemes", [](CriterionResult &r) {
        double worst = 0.0;
        for (double phi : {0.0, std::numbers::pi / 4.0, std::numbers::pi}) {
            const Complex beta1{0.1};
            const Complex beta2 = beta1 * std::polar(1.0, phi);
            for (bool dual : {false, true}) {
                worst = std::max(worst, std::abs(*run(bell_circuit(dual, beta1, beta2, phi)).fidelity - 1.0));
            }
        }
        r.passed = worst <= kTol;
        r.detail = fmt("max|fidelity-1|=%.3e over phi in {0, pi/4, pi}", worst);
    });
}

std::vector<CriterionResult> acceptance::run_builtin() {
    return {ghz_state_and_fraction(),   w_state_and_fraction(),      w_fraction_formula_equivalence(),
            normalization_constants(),  element_unitarity_suite(),   ghz_same_source_exclusion(),
            rate_orders_of_magnitude(), bell_first_order_limits()};
}

std::string acceptance::format_line(const CriterionResult &r) {
    return std::string(r.passed ? "PASS " : "FAIL ") + r.id + " " + r.title + ": " + r.detail;
}
