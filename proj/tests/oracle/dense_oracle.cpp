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

#include "dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "freqbin/error.hpp"
#include "freqbin/postselect.hpp"

namespace oracle {

namespace {

void enumerate(std::size_t modes, int remaining, Occupation &cur, std::size_t k, std::vector<Occupation> &out) {
    if (k == modes) {
        out.push_back(cur);
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        cur[k] = static_cast<std::uint32_t>(n);
        enumerate(modes, remaining - n, cur, k + 1, out);
    }
    cur[k] = 0;
}

double factorial(std::uint32_t n) {
    double f = 1.0;
    for (std::uint32_t k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

// Permanent by expansion along rows, skipping zero entries. The matrices
// are at most kMaxPhotons square and mostly zero.
cplx permanent(const cplx *m, int n, int row, unsigned used) {
    if (row == n) {
        return 1.0;
    }
    cplx total = 0.0;
    for (int col = 0; col < n; ++col) {
        if (used & (1u << col)) {
            continue;
        }
        cplx x = m[row * kMaxPhotons + col];
        if (x != cplx(0.0)) {
            total += x * permanent(m, n, row + 1, used | (1u << col));
        }
    }
    return total;
}

std::vector<int> expand(const Occupation &occ) {
    std::vector<int> out;
    for (std::size_t k = 0; k < occ.size(); ++k) {
        for (std::uint32_t n = 0; n < occ[k]; ++n) {
            out.push_back(static_cast<int>(k));
        }
    }
    return out;
}

std::uint32_t total(const Occupation &occ) {
    return std::accumulate(occ.begin(), occ.end(), 0u);
}

}  // namespace

DenseModel::DenseModel(std::vector<Mode> modes) : modes_(std::move(modes)) {
    std::sort(modes_.begin(), modes_.end());
    Occupation cur(modes_.size(), 0);
    enumerate(modes_.size(), kMaxPhotons, cur, 0, basis_);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        index_[basis_[k]] = static_cast<int>(k);
    }
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        creation_.push_back(creation(static_cast<int>(m)));
    }
}

int DenseModel::mode_index(const Mode &m) const {
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        if (modes_[k] == m) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

Eigen::MatrixXcd DenseModel::creation(int mode) const {
    const auto d = static_cast<Eigen::Index>(basis_.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t col = 0; col < basis_.size(); ++col) {
        Occupation up = basis_[col];
        up[mode] += 1;
        auto it = index_.find(up);
        if (it != index_.end()) {
            a(it->second, static_cast<Eigen::Index>(col)) = std::sqrt(static_cast<double>(up[mode]));
        }
    }
    return a;
}

Eigen::VectorXcd DenseModel::vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_.size()));
    v(index_.at(Occupation(modes_.size(), 0))) = 1.0;
    return v;
}

Eigen::VectorXcd DenseModel::emit(const std::vector<Source> &sources) const {
    Eigen::VectorXcd v = vacuum();
    for (const auto &s : sources) {
        int s0 = mode_index({s.path, 0, 0});
        int s1 = mode_index({s.path, 0, 1});
        int i0 = mode_index({s.path, 1, 0});
        int i1 = mode_index({s.path, 1, 1});
        std::vector<std::tuple<cplx, int, int>> pairs;
        // Modes outside the model carry a zero amplitude in every case built here.
        auto pair = [&](cplx beta, int x, int y) {
            if (beta != cplx(0.0) && x >= 0 && y >= 0) {
                pairs.emplace_back(beta, x, y);
            }
        };
        if (s.dual) {
            pair(s.beta1, s0, i1);
            pair(s.beta2, s1, i0);
        } else {
            pair(s.beta1, s0, i0);
            pair(s.beta2, s1, i1);
        }
        // C† as a sum of dense creation-matrix products, applied to vectors.
        auto apply_c = [&](const Eigen::VectorXcd &x) {
            Eigen::VectorXcd out = Eigen::VectorXcd::Zero(x.size());
            for (const auto &[beta, a, b] : pairs) {
                out += beta * (creation_[a] * (creation_[b] * x));
            }
            return out;
        };
        Eigen::VectorXcd c1 = apply_c(v);
        Eigen::VectorXcd next = v + c1;
        if (s.max_pairs >= 2) {
            next += 0.5 * apply_c(c1);
        }
        v = next;
    }
    return v;
}

Eigen::MatrixXcd DenseModel::lift(const Eigen::MatrixXcd &u) const {
    const auto d = static_cast<Eigen::Index>(basis_.size());
    std::vector<std::vector<int>> expanded;
    std::vector<double> norms;
    for (const auto &occ : basis_) {
        expanded.push_back(expand(occ));
        double f = 1.0;
        for (auto n : occ) {
            f *= factorial(n);
        }
        norms.push_back(f);
    }
    std::vector<std::vector<std::size_t>> by_number(kMaxPhotons + 1);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        by_number[expanded[k].size()].push_back(k);
    }
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(d, d);
    cplx m[kMaxPhotons * kMaxPhotons];
    for (std::size_t in = 0; in < basis_.size(); ++in) {
        const auto &in_modes = expanded[in];
        const int n = static_cast<int>(in_modes.size());
        for (std::size_t out : by_number[in_modes.size()]) {
            const auto &out_modes = expanded[out];
            bool zero_row = false;
            for (int r = 0; r < n && !zero_row; ++r) {
                zero_row = true;
                for (int k = 0; k < n; ++k) {
                    m[r * kMaxPhotons + k] = u(out_modes[r], in_modes[k]);
                    zero_row = zero_row && m[r * kMaxPhotons + k] == cplx(0.0);
                }
            }
            if (zero_row) {
                continue;
            }
            cplx p = permanent(m, n, 0, 0u);
            if (p != cplx(0.0)) {
                big(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)) = p / std::sqrt(norms[in] * norms[out]);
            }
        }
    }
    return big;
}

Eigen::MatrixXcd DenseModel::mode_matrix(const Step &step) const {
    const auto m = static_cast<Eigen::Index>(modes_.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);
    auto swap = [&](int x, int y) {
        if (x < 0 || y < 0) {
            return;
        }
        u(x, x) = u(y, y) = 0.0;
        u(x, y) = u(y, x) = 1.0;
    };
    for (const auto &mode : modes_) {
        switch (step.kind) {
            case Step::Demux:
                // Relabelling into empty modes is the permutation that swaps them.
                if (mode.path == step.a) {
                    std::uint32_t dest = mode.colour == 0 ? step.b : step.c;
                    if (dest != step.a) {
                        swap(mode_index(mode), mode_index({dest, mode.colour, mode.bin}));
                    }
                }
                break;
            case Step::AddDrop:
                if (mode.path == step.a && (!step.colour || *step.colour == mode.colour) &&
                    (!step.bin || *step.bin == mode.bin)) {
                    swap(mode_index(mode), mode_index({step.b, mode.colour, mode.bin}));
                }
                break;
            case Step::Coupler:
                if (mode.path == step.a) {
                    int x = mode_index(mode);
                    int y = mode_index({step.b, mode.colour, mode.bin});
                    u(x, x) = step.t;
                    u(y, y) = step.t;
                    u(y, x) = step.r;
                    u(x, y) = step.r;
                }
                break;
        }
    }
    return u;
}

Eigen::VectorXcd DenseModel::evolve(const Case &c) const {
    Eigen::VectorXcd v = emit(c.sources);
    for (const auto &step : c.steps) {
        v = lift(mode_matrix(step)) * v;
    }
    return v;
}

bool DenseModel::matches(const Occupation &occ, const Case &c) const {
    std::map<std::uint32_t, std::uint32_t> per_path;
    for (std::size_t k = 0; k < occ.size(); ++k) {
        if (occ[k] == 0) {
            continue;
        }
        const Mode &m = modes_[k];
        per_path[m.path] += occ[k];
        auto it = c.pattern.find(m.path);
        if (it == c.pattern.end()) {
            if (c.exclusive) {
                return false;
            }
            continue;
        }
        const Requirement &req = it->second;
        if (req.constrained && ((req.colour && *req.colour != m.colour) || (req.bin && *req.bin != m.bin))) {
            return false;
        }
    }
    for (const auto &[path, req] : c.pattern) {
        if (per_path[path] != req.count) {
            return false;
        }
    }
    return true;
}

Sparse DenseModel::sector(const Eigen::VectorXcd &v, std::uint32_t n) const {
    Sparse out;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        if (total(basis_[k]) == n && std::abs(v(static_cast<Eigen::Index>(k))) > 1e-14) {
            out[basis_[k]] = v(static_cast<Eigen::Index>(k));
        }
    }
    return out;
}

Sparse DenseModel::pattern_projection(const Eigen::VectorXcd &v, const Case &c) const {
    std::uint32_t n = 0;
    for (const auto &kv : c.pattern) {
        n += kv.second.count;
    }
    // Detection is read within the n-photon sector, as the runner does.
    Sparse out;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        if (total(basis_[k]) == n && matches(basis_[k], c) && std::abs(v(static_cast<Eigen::Index>(k))) > 1e-14) {
            out[basis_[k]] = v(static_cast<Eigen::Index>(k));
        }
    }
    return out;
}

std::string Case::describe() const {
    std::ostringstream os;
    for (const auto &s : sources) {
        os << (s.dual ? "dual" : "single") << "@" << s.path << "(" << s.beta1 << "," << s.beta2 << ",p" << s.max_pairs
           << ") ";
    }
    for (const auto &st : steps) {
        const char *names[] = {"demux", "adddrop", "coupler"};
        os << names[st.kind] << "(" << st.a << "," << st.b;
        if (st.kind == Step::Demux) {
            os << "," << st.c;
        }
        os << ") ";
    }
    os << "detect";
    for (const auto &[p, r] : pattern) {
        os << " " << p << ":" << r.count;
    }
    return os.str();
}

namespace {

cplx random_beta(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> mag(0.05, 0.4);
    std::uniform_real_distribution<double> ph(0.0, 2 * M_PI);
    return std::polar(mag(rng), ph(rng));
}

Step random_mixer(std::mt19937_64 &rng, std::uint32_t a, std::uint32_t b, bool with_bins) {
    Step st;
    std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
    if (rng() % 2 == 0) {
        st.kind = Step::Coupler;
        double th = angle(rng);
        cplx g = std::polar(1.0, angle(rng));
        st.t = std::cos(th) * g;
        st.r = cplx(0.0, std::sin(th)) * g;
    } else {
        st.kind = Step::AddDrop;
        if (rng() % 2 == 0) {
            st.colour = static_cast<int>(rng() % 2);
        }
        if (with_bins && rng() % 2 == 0) {
            st.bin = static_cast<std::uint32_t>(rng() % 2);
        }
    }
    if (rng() % 2 == 0) {
        std::swap(a, b);
    }
    st.a = a;
    st.b = b;
    return st;
}

}  // namespace

Case random_case(std::mt19937_64 &rng, int family) {
    Case c;
    if (family == 0) {
        for (std::uint32_t p : {1u, 2u}) {
            for (int col : {0, 1}) {
                for (std::uint32_t b : {0u, 1u}) {
                    c.modes.push_back({p, col, b});
                }
            }
        }
        for (std::uint32_t p : {1u, 2u}) {
            Source s;
            s.dual = rng() % 2 == 0;
            s.path = p;
            s.beta1 = random_beta(rng);
            s.beta2 = random_beta(rng);
            s.max_pairs = 1 + static_cast<int>(rng() % 2);
            c.sources.push_back(s);
        }
        std::size_t n_steps = 1 + rng() % 3;
        for (std::size_t k = 0; k < n_steps; ++k) {
            c.steps.push_back(random_mixer(rng, 1, 2, true));
        }
        // Two or four photons split over the two detectors.
        std::uint32_t n = rng() % 2 == 0 ? 2 : 4;
        std::uint32_t on1 = static_cast<std::uint32_t>(rng() % (n + 1));
        if (on1 > 0) {
            c.pattern[1].count = on1;
        }
        if (n - on1 > 0) {
            c.pattern[2].count = n - on1;
        }
        for (auto &[p, req] : c.pattern) {
            (void)p;
            if (rng() % 3 == 0) {
                req.constrained = true;
                if (rng() % 2 == 0) {
                    req.colour = static_cast<int>(rng() % 2);
                } else {
                    req.bin = static_cast<std::uint32_t>(rng() % 2);
                }
            }
        }
        c.exclusive = rng() % 4 != 0;
    } else {
        for (std::uint32_t p : {1u, 2u, 3u, 4u}) {
            for (int col : {0, 1}) {
                c.modes.push_back({p, col, 0});
            }
        }
        for (std::uint32_t p : {1u, 4u}) {
            Source s;
            s.path = p;
            s.beta1 = random_beta(rng);
            s.beta2 = 0.0;
            s.max_pairs = 1 + static_cast<int>(rng() % 2);
            c.sources.push_back(s);
        }
        Step d1{Step::Demux, 1, 1, 2};
        Step d2{Step::Demux, 4, 4, 3};
        std::size_t which = rng() % 3;  // both demuxes, or only one plus a mixer
        if (which != 2) {
            c.steps.push_back(d1);
        }
        if (which != 1) {
            c.steps.push_back(d2);
        }
        std::size_t mixers = 3 - c.steps.size();
        for (std::size_t k = 0; k < mixers; ++k) {
            c.steps.push_back(random_mixer(rng, 2, 3, false));
        }
        std::vector<std::uint32_t> detectors = {1, 2, 3, 4};
        if (rng() % 2 == 0) {
            c.pattern = {{1, {1}}, {2, {1}}, {3, {1}}, {4, {1}}};
        } else {
            std::uint32_t x = 1 + static_cast<std::uint32_t>(rng() % 4);
            std::uint32_t y = 1 + static_cast<std::uint32_t>(rng() % 4);
            if (x == y) {
                c.pattern[x].count = 2;
            } else {
                c.pattern[x].count = 1;
                c.pattern[y].count = 1;
            }
        }
        c.exclusive = true;
    }
    return c;
}

freqbin::Circuit to_circuit(const Case &c) {
    freqbin::Circuit circuit;
    circuit.name = "oracle_case";
    for (const auto &s : c.sources) {
        auto spec = s.dual ? freqbin::dual_pump_source(s.beta1, s.beta2) : freqbin::single_pump_source(s.beta1, s.beta2);
        circuit.sources.push_back({spec.placed_on(s.path), s.path, s.max_pairs});
    }
    for (const auto &st : c.steps) {
        freqbin::ModePredicate pred;
        if (st.colour) {
            pred.colour = *st.colour == 0 ? freqbin::Colour::Signal : freqbin::Colour::Idler;
        }
        pred.bin = st.bin;
        switch (st.kind) {
            case Step::Demux:
                circuit.elements.push_back(freqbin::Demux{st.a, st.b, st.c});
                break;
            case Step::AddDrop:
                circuit.elements.push_back(freqbin::AddDrop{st.a, st.b, pred});
                break;
            case Step::Coupler:
                circuit.elements.push_back(freqbin::Coupler{st.a, st.b, {st.t, st.r}});
                break;
        }
    }
    for (const auto &[p, r] : c.pattern) {
        freqbin::PathRequirement req;
        req.count = r.count;
        if (r.constrained) {
            freqbin::ModePredicate pred;
            if (r.colour) {
                pred.colour = *r.colour == 0 ? freqbin::Colour::Signal : freqbin::Colour::Idler;
            }
            pred.bin = r.bin;
            req.constraint = pred;
        }
        circuit.pattern.requirements[p] = req;
        circuit.logical_paths.push_back(p);
    }
    circuit.pattern.exclusive = c.exclusive;
    return circuit;
}

Occupation occupation_of(const freqbin::FockBasisState &ket, const DenseModel &model) {
    Occupation occ(model.modes().size(), 0);
    for (const auto &[mode, n] : ket.entries()) {
        int k = model.mode_index({mode.path, mode.colour == freqbin::Colour::Signal ? 0 : 1, mode.bin});
        if (k < 0) {
            throw std::runtime_error("library populated mode " + mode.str() + " outside the oracle basis");
        }
        occ[k] = n;
    }
    return occ;
}

namespace {

Sparse to_sparse(const freqbin::StateVector &s, const DenseModel &model) {
    Sparse out;
    for (const auto &[ket, amp] : s.terms()) {
        out[occupation_of(ket, model)] = amp;
    }
    return out;
}

double max_difference(const Sparse &a, const Sparse &b) {
    double worst = 0.0;
    for (const auto &[k, v] : a) {
        auto it = b.find(k);
        worst = std::max(worst, std::abs(v - (it == b.end() ? cplx(0.0) : it->second)));
    }
    for (const auto &[k, v] : b) {
        if (!a.count(k)) {
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

}  // namespace

Comparison compare(const Case &c) {
    Comparison out;
    DenseModel model(c.modes);
    Eigen::VectorXcd dense = model.evolve(c);
    std::uint32_t n = 0;
    for (const auto &[p, r] : c.pattern) {
        (void)p;
        n += r.count;
    }
    Sparse want_sector = model.sector(dense, n);
    Sparse want_pattern = model.pattern_projection(dense, c);
    double want_prob = 0.0;
    for (const auto &[k, v] : want_pattern) {
        (void)k;
        want_prob += std::norm(v);
    }

    try {
        freqbin::Circuit circuit = to_circuit(c);
        freqbin::StateVector evolved = freqbin::evolve(circuit);
        freqbin::StateVector sector = freqbin::project_photon_number(evolved, n);
        out.max_sector_error = max_difference(to_sparse(sector, model), want_sector);

        // Library post-selection runs on the normalized n-photon sector.
        double want_sector_norm = 0.0;
        for (const auto &[k, v] : want_sector) {
            (void)k;
            want_sector_norm += std::norm(v);
        }
        auto ps = freqbin::postselect(freqbin::normalize(sector).state, circuit.effective_pattern());
        double want_fraction = want_sector_norm > 0 ? want_prob / want_sector_norm : 0.0;
        out.probability_error = std::abs(ps.probability - want_fraction);
        out.pattern_possible = want_fraction > freqbin::kProbabilityFloor;
        if (ps.state.has_value() != out.pattern_possible) {
            out.failure = "library and oracle disagree on whether the pattern is possible";
            return out;
        }
        if (ps.state) {
            Sparse want_norm;
            double scale = 1.0 / std::sqrt(want_prob);
            for (const auto &[k, v] : want_pattern) {
                want_norm[k] = v * scale;
            }
            out.max_postselect_error = max_difference(to_sparse(*ps.state, model), want_norm);
        }
        // The end-to-end runner needs one photon per detector and a state
        // that factors into bins times colours; cases outside that are covered
        // by the comparisons above.
        bool single_photons = std::all_of(c.pattern.begin(), c.pattern.end(),
                                          [](const auto &kv) { return kv.second.count == 1; });
        if (single_photons && c.exclusive && circuit.problems().empty()) {
            try {
                freqbin::SimulationResult r = freqbin::run(circuit);
                out.probability_error = std::max(out.probability_error, std::abs(r.coincidence_fraction - want_fraction));
            } catch (const freqbin::SimulationError &e) {
                if (e.code() != freqbin::ErrorCode::NotColourSeparable &&
                    e.code() != freqbin::ErrorCode::ImpossiblePattern) {
                    throw;
                }
            }
        }
    } catch (const std::exception &e) {
        out.failure = e.what();
    }
    return out;
}

}  // namespace oracle
