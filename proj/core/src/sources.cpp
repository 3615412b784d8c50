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

#include "freqbin/sources.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "freqbin/error.hpp"

using namespace freqbin;

void SourceSpec::validate() const {
    if (terms.empty()) {
        throw SimulationError(ErrorCode::DegenerateSource, "source '" + label + "' has no pair terms");
    }
    for (const auto &t : terms) {
        if (t.first == t.second) {
            throw SimulationError(ErrorCode::DegenerateSource,
                                  "source '" + label + "' pairs mode " + t.first.str() + " with itself");
        }
    }
    if (!(pair_probability() > 0.0)) {
        throw SimulationError(ErrorCode::DegenerateSource, "source '" + label + "' has all betas zero");
    }
}

std::vector<std::string> SourceSpec::warnings() const {
    std::vector<std::string> out;
    for (const auto &t : terms) {
        if (std::abs(t.beta) >= 1.0) {
            out.push_back("source '" + label + "': |beta| = " + std::to_string(std::abs(t.beta)) + " on (" +
                          t.first.str() + ", " + t.second.str() + ") is outside the low-gain regime");
        }
    }
    return out;
}

double SourceSpec::pair_probability() const {
    double total = 0.0;
    for (const auto &t : terms) {
        total += std::norm(t.beta);
    }
    return total;
}

SourceSpec SourceSpec::placed_on(PathIndex path) const {
    SourceSpec out = *this;
    for (auto &t : out.terms) {
        t.first.path = path;
        t.second.path = path;
    }
    return out;
}

namespace {

SourceSpec make_source(std::string label, Complex beta1, ModeLabel m1a, ModeLabel m1b, Complex beta2, ModeLabel m2a,
                       ModeLabel m2b) {
    SourceSpec s;
    s.label = std::move(label);
    s.terms.push_back({beta1, m1a, m1b});
    s.terms.push_back({beta2, m2a, m2b});
    s.validate();
    return s;
}

}  // namespace

SourceSpec freqbin::single_pump_source(Complex beta1, Complex beta2) {
    return make_source("single_pump", beta1, signal_mode(0, 0), idler_mode(0, 0), beta2, signal_mode(0, 1),
                       idler_mode(0, 1));
}

SourceSpec freqbin::dual_pump_source(Complex beta1, Complex beta2) {
    return make_source("dual_pump", beta1, signal_mode(0, 0), idler_mode(0, 1), beta2, signal_mode(0, 1),
                       idler_mode(0, 0));
}

PumpEnvelope freqbin::gaussian_envelope(Complex alpha0, double tau, Complex gamma) {
    if (!(tau > 0.0)) {
        throw SimulationError(ErrorCode::InvalidArgument, "pulse duration tau must be positive");
    }
    PumpEnvelope env;
    env.amplitude = [alpha0, tau](double t) { return alpha0 * std::exp(-t * t / (2.0 * tau * tau)); };
    env.t0 = -8.0 * tau;
    env.t1 = 8.0 * tau;
    env.gamma = gamma;
    return env;
}

Complex freqbin::compute_beta(const PumpEnvelope &envelope) {
    if (!envelope.amplitude || !(envelope.t1 > envelope.t0)) {
        throw SimulationError(ErrorCode::InvalidArgument, "pump envelope needs an amplitude and t1 > t0");
    }
    using Integrator = boost::math::quadrature::gauss_kronrod<double, 31>;
    constexpr unsigned kMaxDepth = 15;
    const double span = envelope.t1 - envelope.t0;
    const double abs_tol = 1e-12 * span;

    // Integrate on the unit interval so the tolerance is scale free in time.
    auto squared = [&](double u) {
        Complex a = envelope.amplitude(envelope.t0 + u * span);
        return a * a;
    };
    double err_re = 0.0;
    double err_im = 0.0;
    double re = 0.0;
    double im = 0.0;
    try {
        re = Integrator::integrate([&](double u) { return squared(u).real(); }, 0.0, 1.0, kMaxDepth, 1e-14,
                                   &err_re);
        im = Integrator::integrate([&](double u) { return squared(u).imag(); }, 0.0, 1.0, kMaxDepth, 1e-14,
                                   &err_im);
    } catch (const std::exception &e) {
        throw SimulationError(ErrorCode::QuadratureFailure, std::string("pump integral failed: ") + e.what());
    }
    re *= span;
    im *= span;
    double err = std::hypot(err_re, err_im) * span;
    if (!std::isfinite(re) || !std::isfinite(im) || !(err <= abs_tol)) {
        throw SimulationError(ErrorCode::QuadratureFailure,
                              "pump integral error estimate " + std::to_string(err) + " exceeds tolerance " +
                                  std::to_string(abs_tol));
    }
    return Complex{0.0, -1.0} * envelope.gamma * Complex{re, im};
}

namespace {

StateVector apply_pair_operator(const StateVector &state, const SourceSpec &source) {
    StateVector out(state.prune_tolerance());
    for (const auto &t : source.terms) {
        out += apply_creation(apply_creation(state, t.second), t.first).scaled(t.beta);
    }
    return out;
}

}  // namespace

StateVector freqbin::pair_operator_power(const SourceSpec &source, int power) {
    if (power < 0) {
        throw SimulationError(ErrorCode::InvalidArgument, "pair operator power must be non-negative");
    }
    source.validate();
    StateVector s = StateVector::vacuum();
    for (int p = 0; p < power; ++p) {
        s = apply_pair_operator(s, source);
    }
    return s;
}

StateVector freqbin::emit_state(const SourceSpec &source, int max_pairs) {
    if (max_pairs < 1 || max_pairs > 2) {
        throw SimulationError(ErrorCode::InvalidArgument, "max_pairs must be 1 or 2");
    }
    source.validate();
    StateVector total = StateVector::vacuum();
    StateVector order = StateVector::vacuum();
    double factorial = 1.0;
    for (int p = 1; p <= max_pairs; ++p) {
        order = apply_pair_operator(order, source);
        factorial *= p;
        total += order.scaled(1.0 / factorial);
    }
    return total;
}

StateVector freqbin::tensor_product(const StateVector &a, const StateVector &b) {
    auto support_a = a.support();
    for (const auto &m : b.support()) {
        if (support_a.count(m)) {
            throw SimulationError(ErrorCode::ModeCollision, "tensor factors share mode " + m.str());
        }
    }
    StateVector out(std::min(a.prune_tolerance(), b.prune_tolerance()));
    for (const auto &[ka, ca] : a.terms()) {
        for (const auto &[kb, cb] : b.terms()) {
            std::vector<FockBasisState::Entry> merged = ka.entries();
            merged.insert(merged.end(), kb.entries().begin(), kb.entries().end());
            out.add(FockBasisState(std::move(merged)), ca * cb);
        }
    }
    return out;
}
