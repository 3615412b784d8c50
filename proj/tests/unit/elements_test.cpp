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

#include "freqbin/elements.hpp"
#include "freqbin/error.hpp"
#include "test_util.hpp"

using namespace freqbin;

namespace {

FockBasisState ket(std::vector<FockBasisState::Entry> e) {
    return FockBasisState(std::move(e));
}

// Runs `f` on every basis ket of `s` separately and checks each output ket
// keeps the input's (colour, bin) photon counts.
template <typename F>
void expect_conserves_colour_and_bin(const StateVector &s, F f) {
    for (const auto &[k, a] : s.terms()) {
        (void)a;
        StateVector out = f(StateVector::basis(k));
        for (const auto &[k2, a2] : out.terms()) {
            (void)a2;
            EXPECT_EQ(test_util::colour_bin_counts(k2), test_util::colour_bin_counts(k)) << k.str() << " -> " << k2.str();
            EXPECT_EQ(k2.total_photons(), k.total_photons());
        }
    }
}

}  // namespace

TEST(Demux, RoutesByColour) {
    StateVector s = StateVector::basis(ket({{signal_mode(1, 0), 1}, {idler_mode(1, 1), 2}}));
    StateVector out = apply_demux(s, 1, 5, 6);
    EXPECT_EQ(out, StateVector::basis(ket({{signal_mode(5, 0), 1}, {idler_mode(6, 1), 2}})));
    // Leaving signals in place is allowed.
    EXPECT_EQ(apply_demux(s, 1, 1, 2),
              StateVector::basis(ket({{signal_mode(1, 0), 1}, {idler_mode(2, 1), 2}})));
}

TEST(Demux, DetectsCollisions) {
    StateVector s = StateVector::basis(ket({{idler_mode(1, 0), 1}, {idler_mode(2, 0), 1}}));
    try {
        apply_demux(s, 1, 1, 2);
        FAIL() << "expected ModeCollision";
    } catch (const SimulationError &e) {
        EXPECT_EQ(e.code(), ErrorCode::ModeCollision);
    }
    EXPECT_THROW(apply_demux(s, 1, 3, 3), SimulationError);
}

TEST(AddDrop, SwapsOnlyMatchingModes) {
    ModePredicate idler_bin1{Colour::Idler, 1};
    StateVector s = StateVector::basis(
        ket({{idler_mode(2, 1), 1}, {idler_mode(2, 0), 1}, {signal_mode(3, 1), 1}}));
    StateVector out = apply_adddrop_swap(s, 2, 3, idler_bin1);
    EXPECT_EQ(out, StateVector::basis(ket({{idler_mode(3, 1), 1}, {idler_mode(2, 0), 1}, {signal_mode(3, 1), 1}})));
    EXPECT_THROW(apply_adddrop_swap(s, 2, 2, idler_bin1), SimulationError);
}

TEST(AddDrop, IsAnInvolution) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        StateVector s = test_util::random_state(rng, {1, 2, 3});
        ModePredicate p;
        if (rng() % 2) {
            p.colour = rng() % 2 ? Colour::Signal : Colour::Idler;
        }
        if (rng() % 2) {
            p.bin = static_cast<BinIndex>(rng() % 2);
        }
        EXPECT_EQ(apply_adddrop_swap(apply_adddrop_swap(s, 1, 3, p), 1, 3, p), s);
    }
}

TEST(Coupler, SinglePhotonSplitsByTAndR) {
    CouplerParams c = CouplerParams::from_theta(0.3);
    StateVector s = StateVector::basis(ket({{signal_mode(1, 0), 1}}));
    StateVector out = apply_directional_coupler(s, 1, 2, c);
    EXPECT_NEAR(std::abs(out.amplitude(ket({{signal_mode(1, 0), 1}})) - std::cos(0.3)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude(ket({{signal_mode(2, 0), 1}})) - Complex(0, std::sin(0.3))), 0.0, 1e-15);
    // The b input transmits to b and reflects to a.
    StateVector b = apply_directional_coupler(StateVector::basis(ket({{idler_mode(2, 1), 1}})), 1, 2, c);
    EXPECT_NEAR(std::abs(b.amplitude(ket({{idler_mode(2, 1), 1}})) - std::cos(0.3)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b.amplitude(ket({{idler_mode(1, 1), 1}})) - Complex(0, std::sin(0.3))), 0.0, 1e-15);
}

TEST(Coupler, HongOuMandelNullCoincidence) {
    StateVector s = StateVector::basis(ket({{signal_mode(1, 0), 1}, {signal_mode(2, 0), 1}}));
    StateVector out = apply_directional_coupler(s, 1, 2, CouplerParams::balanced());
    EXPECT_EQ(out.amplitude(ket({{signal_mode(1, 0), 1}, {signal_mode(2, 0), 1}})), Complex(0.0));
    EXPECT_NEAR(std::abs(out.amplitude(ket({{signal_mode(1, 0), 2}}))), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-14);
    // Distinguishable photons (different bins) do not bunch.
    StateVector d = StateVector::basis(ket({{signal_mode(1, 0), 1}, {signal_mode(2, 1), 1}}));
    StateVector dout = apply_directional_coupler(d, 1, 2, CouplerParams::balanced());
    EXPECT_NEAR(std::norm(dout.amplitude(ket({{signal_mode(1, 0), 1}, {signal_mode(2, 1), 1}}))), 0.25, 1e-15);
}

TEST(Coupler, ValidateRequiresUnitarity) {
    EXPECT_NO_THROW(CouplerParams::balanced().validate());
    EXPECT_NO_THROW(CouplerParams::from_theta(1.234).validate());
    CouplerParams real_half{std::sqrt(0.5), std::sqrt(0.5)};
    try {
        real_half.validate();
        FAIL() << "expected NonUnitaryCoupler";
    } catch (const SimulationError &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonUnitaryCoupler);
    }
    EXPECT_THROW((CouplerParams{0.9, Complex(0, 0.1)}.validate()), SimulationError);
}

TEST(Coupler, ConjugateParametersInvert) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    for (int trial = 0; trial < 50; ++trial) {
        double th = angle(rng);
        Complex g = std::polar(1.0, angle(rng));
        CouplerParams c{std::cos(th) * g, Complex(0, std::sin(th)) * g};
        CouplerParams inv{std::conj(c.transmission), std::conj(c.reflection)};
        StateVector s = test_util::random_state(rng, {1, 2});
        StateVector back = apply_directional_coupler(apply_directional_coupler(s, 1, 2, c), 1, 2, inv);
        StateVector diff = back + s.scaled(-1.0);
        EXPECT_LT(diff.norm_squared(), 1e-24);
    }
}

TEST(Elements, PreserveNormAndConserveColourAndBin) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    for (int trial = 0; trial < 100; ++trial) {
        StateVector s = test_util::random_state(rng, {1, 2, 3});
        ModePredicate p{Colour::Idler, static_cast<BinIndex>(rng() % 2)};
        CouplerParams c = CouplerParams::from_theta(angle(rng));
        auto demux = [](const StateVector &x) { return apply_demux(x, 1, 1, 4); };
        auto adddrop = [&](const StateVector &x) { return apply_adddrop_swap(x, 2, 3, p); };
        auto coupler = [&](const StateVector &x) { return apply_directional_coupler(x, 1, 3, c); };
        EXPECT_NEAR(demux(s).norm_squared(), 1.0, 1e-12);
        EXPECT_NEAR(adddrop(s).norm_squared(), 1.0, 1e-12);
        EXPECT_NEAR(coupler(s).norm_squared(), 1.0, 1e-12);
        expect_conserves_colour_and_bin(s, demux);
        expect_conserves_colour_and_bin(s, adddrop);
        expect_conserves_colour_and_bin(s, coupler);
    }
}

TEST(Elements, VariantDispatchAndFilterIdentity) {
    StateVector s = StateVector::basis(ket({{signal_mode(1, 0), 1}, {idler_mode(1, 1), 1}}));
    EXPECT_EQ(apply_element(s, Filter{1, {Colour::Signal, 0}}), s);
    EXPECT_EQ(apply_element(s, Demux{1, 1, 2}), apply_demux(s, 1, 1, 2));
    EXPECT_EQ(apply_element(s, AddDrop{1, 2, {}}), apply_adddrop_swap(s, 1, 2, {}));
}

TEST(ModePredicate, MatchesAndPrints) {
    ModePredicate any;
    EXPECT_TRUE(any.matches(signal_mode(1, 7)));
    ModePredicate i1{Colour::Idler, 1};
    EXPECT_TRUE(i1.matches(idler_mode(3, 1)));
    EXPECT_FALSE(i1.matches(idler_mode(3, 0)));
    EXPECT_FALSE(i1.matches(signal_mode(3, 1)));
}
