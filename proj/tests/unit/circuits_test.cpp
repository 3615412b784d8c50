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

#include <gtest/gtest.h>

#include <random>

#include "freqbin/circuits.hpp"
#include "freqbin/error.hpp"
#include "test_util.hpp"

using namespace freqbin;

namespace {

// Four-photon sector of the two first-order GHZ sources holds one ket per
// product β_iβ_j (i ∈ {1,2}, j ∈ {3,4}), each of unit norm; only the
// β₁β₃ and β₂β₄ kets reach one photon per detector.
double ghz_fraction_oracle(const std::array<Complex, 4> &b) {
    double good = std::norm(b[0] * b[2]) + std::norm(b[1] * b[3]);
    double all = (std::norm(b[0]) + std::norm(b[1])) * (std::norm(b[2]) + std::norm(b[3]));
    return good / all;
}

}  // namespace

TEST(GhzDevice, RandomBetasMatchFractionOracleAndTarget) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        std::array<Complex, 4> b;
        for (auto &x : b) {
            x = test_util::random_complex(rng, 0.2);
        }
        SimulationResult r = run(build_ghz_device(b));
        EXPECT_NEAR(r.coincidence_fraction, ghz_fraction_oracle(b), 1e-12);
        EXPECT_NEAR(ghz_fraction_formula(b), ghz_fraction_oracle(b), 1e-14);
        ASSERT_TRUE(r.fidelity.has_value());
        EXPECT_NEAR(*r.fidelity, 1.0, 1e-12);
        EXPECT_EQ(colour_pattern_str(r.colour_pattern), "S,I,I,S");
        EXPECT_EQ(r.photon_number, 4u);
        EXPECT_NEAR(r.pattern_probability, r.n_photon_probability * r.coincidence_fraction, 1e-15);
    }
}

TEST(GhzDevice, SecondOrderEmissionLeavesTheStateUnchanged) {
    std::array<Complex, 4> b = {0.1, Complex(0, 0.2), 0.15, 0.05};
    SimulationResult first = run(build_ghz_device(b, 1));
    SimulationResult second = run(build_ghz_device(b, 2));
    EXPECT_NEAR(*second.fidelity, 1.0, 1e-12);
    for (const auto &[bins, amp] : first.bin_state.amplitudes) {
        EXPECT_NEAR(std::abs(second.bin_state.amplitude(bins) - amp), 0.0, 1e-12);
    }
    // Same-source double pairs add weight to the four-photon sector without
    // adding coincidences.
    EXPECT_LT(second.coincidence_fraction, first.coincidence_fraction);
    EXPECT_NEAR(second.pattern_probability, first.pattern_probability, 1e-15);
}

TEST(GhzDevice, RejectsVanishingProducts) {
    EXPECT_THROW(build_ghz_device({0.1, 0.1, 0.0, 0.0}), SimulationError);
    EXPECT_THROW(run(build_ghz_device({0.1, 0.1, 0.1, 0.1}, 3)), SimulationError);
}

TEST(WDevice, FractionAndHeraldNormMatchClosedForms) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        Complex b1 = test_util::random_complex(rng, 0.2);
        Complex b2 = test_util::random_complex(rng, 0.2);
        SimulationResult r = run(build_w_device(b1, b2));
        EXPECT_NEAR(r.coincidence_fraction, w_fraction_formula(b1, b2), 1e-12);
        double a = std::norm(b1), b = std::norm(b2);
        EXPECT_NEAR(w_herald_norm_squared(b1, b2), 16 * b * b + 8 * a * b, 1e-15);
        EXPECT_NEAR(dual_pump_pair_of_pairs_norm_squared(b1, b2), 4 * a * a + 4 * b * b + 4 * a * b, 1e-15);
        EXPECT_EQ(r.herald_bins, (BinString{1}));
        EXPECT_EQ(colour_pattern_str(r.colour_pattern), "I,I,S,S");
        EXPECT_NEAR(*r.fidelity, 1.0, 1e-12);
    }
}

TEST(WDevice, CanonicalConfiguration) {
    SimulationResult r = run(build_w_device(0.2, 0.1));
    EXPECT_NEAR(r.coincidence_fraction, 1.0 / 28.0, 1e-12);
    EXPECT_NEAR(fidelity(r.bin_state, w_target(1.0, 1.0, 1.0)), 1.0, 1e-12);
}

TEST(WDevice, UnbalancedCouplersStillProduceTheHeraldedState) {
    // The couplers set how often the herald fires, not which state it heralds.
    SimulationResult r = run(build_w_device(0.2, 0.1, CouplerParams::from_theta(0.4), CouplerParams::from_theta(1.1)));
    EXPECT_NEAR(*r.fidelity, 1.0, 1e-12);
    EXPECT_GT(std::abs(r.coincidence_fraction - 1.0 / 28.0), 1e-3);
}

TEST(Circuit, ProblemsAreCollectedTogether) {
    Circuit c = build_ghz_device({0.1, 0.1, 0.1, 0.1});
    c.sources.push_back(c.sources.front());
    c.elements.push_back(Coupler{1, 2, {std::sqrt(0.5), std::sqrt(0.5)}});
    c.elements.push_back(Filter{9, {}});
    c.target = w_target(1, 1, 1);
    auto problems = c.problems();
    EXPECT_GE(problems.size(), 4u);
    try {
        c.validate();
        FAIL();
    } catch (const SimulationError &e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
        EXPECT_NE(std::string(e.what()).find("NonUnitary"), std::string::npos) << e.what();
    }
}

TEST(Circuit, FiltersFoldIntoThePattern) {
    Circuit c = build_w_device(0.2, 0.1);
    DetectionPattern p = c.effective_pattern();
    ASSERT_TRUE(p.requirements.at(4).constraint.has_value());
    EXPECT_EQ(p.requirements.at(4).constraint->colour, Colour::Signal);
    EXPECT_EQ(p.requirements.at(4).constraint->bin, BinIndex{1});
    EXPECT_FALSE(c.pattern.requirements.at(4).constraint.has_value());
}

TEST(Rates, LiteralProducts) {
    RateEstimate r = estimate_rates(0.1, 1e6, 0.5);
    EXPECT_NEAR(r.four_photon_rate, 1e4, 1e-9);
    EXPECT_NEAR(r.entangled_state_rate, 5e3, 1e-9);
    EXPECT_THROW(estimate_rates(0.0, 1e6, 0.5), SimulationError);
    EXPECT_THROW(estimate_rates(1.0, 1e6, 0.5), SimulationError);
    EXPECT_THROW(estimate_rates(0.1, 0.0, 0.5), SimulationError);
}

TEST(Sweep, GridOrderFirstAxisSlowest) {
    CircuitTemplate t = w_device_template();
    ParameterGrid grid = {{"beta_ratio", {0.5, 1, 2, 4}}, {"phase", {0.0, 1.0}}};
    auto rows = sweep(t, grid);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(parameter_value(rows[1].assignment, "beta_ratio"), 0.5);
    EXPECT_EQ(parameter_value(rows[1].assignment, "phase"), 1.0);
    EXPECT_EQ(parameter_value(rows[2].assignment, "beta_ratio"), 1.0);
    for (const auto &row : rows) {
        ASSERT_TRUE(row.ok()) << row.error();
        double b2 = parameter_value(row.assignment, "b2");
        double ratio = parameter_value(row.assignment, "beta_ratio");
        Complex beta2 = std::polar(b2, parameter_value(row.assignment, "phase"));
        EXPECT_NEAR(row.result().coincidence_fraction, w_fraction_formula(ratio * b2, beta2), 1e-12);
    }
}

TEST(Sweep, ThreadedRunsMatchSerial) {
    CircuitTemplate t = ghz_device_template();
    ParameterGrid grid = {{"b", {0.05, 0.1, 0.2}}, {"phase", {0.0, 0.5, 1.0, 2.0}}};
    auto serial = sweep(t, grid, 1);
    auto threaded = sweep(t, grid, 4);
    ASSERT_EQ(serial.size(), threaded.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        EXPECT_EQ(serial[k].assignment, threaded[k].assignment);
        EXPECT_EQ(serial[k].result().coincidence_fraction, threaded[k].result().coincidence_fraction);
    }
}

TEST(Sweep, RowErrorsAreRecordedAndBadAxesRejected) {
    CircuitTemplate t = w_device_template();
    auto rows = sweep(t, {{"b2", {0.0, 0.1}}});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_FALSE(rows[0].ok());
    EXPECT_TRUE(rows[1].ok());
    EXPECT_THROW(sweep(t, {{"nope", {1.0}}}), SimulationError);
    EXPECT_THROW(sweep(t, {{"b2", {}}}), SimulationError);
    EXPECT_THROW(sweep(t, {}), SimulationError);
}
