// Copyright 2026 The qmetro Authors
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

#include "qmetro/oracle_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>


namespace qmetro::oracle {

namespace {

constexpr double kDenseTol = 1e-10;
constexpr Complex kI{0.0, 1.0};

void check_qubits(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("oracle: n must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n));
    }
}

DenseMatrix kron(const DenseMatrix &a, const DenseMatrix &b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

DenseMatrix hermitian_part(const DenseMatrix &m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DenseState::DenseState(int n, DenseMatrix rho) : n_(n), rho_(std::move(rho)) {
    check_qubits(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (rho_.rows() != dim || rho_.cols() != dim) {
        throw std::invalid_argument("DenseState: dimension mismatch");
    }
    if (std::abs(rho_.trace() - Complex{1.0, 0.0}) > kDenseTol) {
        throw std::invalid_argument("DenseState: trace is not 1");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kDenseTol) {
        throw std::invalid_argument("DenseState: not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(rho_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kDenseTol) {
        throw std::invalid_argument("DenseState: not positive semidefinite");
    }
}

DenseState DenseState::ghz(int n) { return embed(n, ghz_probe()); }

DenseState DenseState::basis(int n, unsigned index) {
    check_qubits(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    DenseMatrix rho = DenseMatrix::Zero(dim, dim);
    rho(index, index) = 1.0;
    return DenseState(n, rho);
}

DenseState DenseState::embed(int n, const LogicalState &logical) {
    check_qubits(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    const Eigen::Index last = dim - 1;
    DenseMatrix rho = DenseMatrix::Zero(dim, dim);
    rho(0, 0) = logical(0, 0);
    rho(0, last) = logical(0, 1);
    rho(last, 0) = logical(1, 0);
    rho(last, last) = logical(1, 1);
    return DenseState(n, rho);
}

DenseMatrix pauli_matrix(Pauli p) {
    DenseMatrix m(2, 2);
    switch (p) {
        case Pauli::I:
            m << 1, 0, 0, 1;
            break;
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, -kI, kI, 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

DenseMatrix pauli_string(const std::vector<Pauli> &ops) {
    DenseMatrix out = DenseMatrix::Identity(1, 1);
    for (Pauli p : ops) {
        out = kron(out, pauli_matrix(p));
    }
    return out;
}

DenseMatrix single_site(int n, int site, Pauli p) {
    if (site < 0 || site >= n) {
        throw std::out_of_range("oracle: site " + std::to_string(site) + " out of range");
    }
    std::vector<Pauli> ops(n, Pauli::I);
    ops[site] = p;
    return pauli_string(ops);
}

DenseMatrix full_hamiltonian(const HamiltonianSpec &spec) {
    spec.validate();
    check_qubits(spec.n);
    const Eigen::Index dim = Eigen::Index{1} << spec.n;
    DenseMatrix h = DenseMatrix::Zero(dim, dim);
    double z_coef = spec.kind == HamiltonianKind::SingleParamZ ? spec.lambda[0] : spec.lambda[1];
    for (int k = 0; k < spec.n; k++) {
        h += z_coef * single_site(spec.n, k, Pauli::Z);
    }
    if (spec.kind == HamiltonianKind::TwoParamXZ) {
        h += spec.lambda[0] * pauli_string(std::vector<Pauli>(spec.n, Pauli::X));
    }
    return h;
}

DenseMatrix full_observable(ObservableName name, int n) {
    check_qubits(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (name == ObservableName::YtoN) {
        return pauli_string(std::vector<Pauli>(n, Pauli::Y));
    }
    Eigen::VectorXcd ghz_y = Eigen::VectorXcd::Zero(dim);
    ghz_y(0) = 1.0 / std::sqrt(2.0);
    ghz_y(dim - 1) = kI / std::sqrt(2.0);
    return 2.0 * ghz_y * ghz_y.adjoint() - DenseMatrix::Identity(dim, dim);
}

namespace {

DenseMatrix full_unitary(const HamiltonianSpec &spec) {
    DenseMatrix h = full_hamiltonian(spec);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
    Eigen::VectorXcd phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); k++) {
        phases(k) = std::exp(-kI * (static_cast<double>(spec.t) * eig.eigenvalues()(k)));
    }
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

DenseState full_evolve(const DenseState &rho, const HamiltonianSpec &spec) {
    if (spec.n != rho.n()) {
        throw std::invalid_argument("full_evolve: dimension mismatch between state and Hamiltonian");
    }
    if (spec.t == 0) {
        return rho;
    }
    DenseMatrix u = full_unitary(spec);
    return DenseState(rho.n(), hermitian_part(u * rho.matrix() * u.adjoint()));
}

DenseState apply_site_channel(const DenseState &rho, const PauliChannelSpec &spec, int site) {
    spec.validate();
    const int n = rho.n();
    DenseMatrix x = single_site(n, site, Pauli::X);
    DenseMatrix y = single_site(n, site, Pauli::Y);
    DenseMatrix z = single_site(n, site, Pauli::Z);
    const DenseMatrix &r = rho.matrix();
    DenseMatrix out = spec.p_i * r + spec.p_x * (x * r * x) + spec.p_y * (y * r * y) + spec.p_z * (z * r * z);
    return DenseState(n, hermitian_part(out));
}

DenseState apply_all_sites(const DenseState &rho, const PauliChannelSpec &spec) {
    DenseState out = rho;
    for (int k = 0; k < rho.n(); k++) {
        out = apply_site_channel(out, spec, k);
    }
    return out;
}

namespace {

// X-correction mask the decoder applies for the syndrome of basis index `index`.
unsigned correction_for(unsigned index, int n) {
    const unsigned all = (1u << n) - 1;
    // Site k sits at bit n-1-k; the candidate leaves site 0 (the top bit) unflipped.
    unsigned top = (index >> (n - 1)) & 1u;
    unsigned candidate = top ? (index ^ all) : index;
    int weight = std::popcount(candidate);
    if (2 * weight > n) {
        candidate ^= all;
    }
    return candidate;
}

unsigned syndrome_of(unsigned index, int n) {
    unsigned s = 0;
    for (int k = 0; k + 1 < n; k++) {
        unsigned b0 = (index >> k) & 1u;
        unsigned b1 = (index >> (k + 1)) & 1u;
        s |= (b0 ^ b1) << k;
    }
    return s;
}

}  // namespace

DenseState qec_round_full(const DenseState &rho) {
    const int n = rho.n();
    const Eigen::Index dim = Eigen::Index{1} << n;
    const DenseMatrix &r = rho.matrix();
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    for (unsigned i = 0; i < dim; i++) {
        for (unsigned j = 0; j < dim; j++) {
            // Syndrome projection keeps only coherences inside one sector.
            if (syndrome_of(i, n) != syndrome_of(j, n)) {
                continue;
            }
            unsigned c = correction_for(i, n);
            out(i ^ c, j ^ c) += r(i, j);
        }
    }
    return DenseState(n, out);
}

std::array<double, 8> swap_test_full(const DenseState &rho, ObservableName obs) {
    const int n = rho.n();
    const Eigen::Index copy_dim = Eigen::Index{1} << n;
    const Eigen::Index pair_dim = copy_dim * copy_dim;
    const DenseMatrix &r = rho.matrix();

    // Control |0><0| (x) rho (x) rho; control is the most significant qubit.
    DenseMatrix pair = kron(r, r);
    DenseMatrix sigma = DenseMatrix::Zero(2 * pair_dim, 2 * pair_dim);
    sigma.topLeftCorner(pair_dim, pair_dim) = pair;

    auto hadamard_on_control = [&](DenseMatrix &s) {
        DenseMatrix s00 = s.topLeftCorner(pair_dim, pair_dim);
        DenseMatrix s01 = s.topRightCorner(pair_dim, pair_dim);
        DenseMatrix s10 = s.bottomLeftCorner(pair_dim, pair_dim);
        DenseMatrix s11 = s.bottomRightCorner(pair_dim, pair_dim);
        s.topLeftCorner(pair_dim, pair_dim) = 0.5 * (s00 + s01 + s10 + s11);
        s.topRightCorner(pair_dim, pair_dim) = 0.5 * (s00 - s01 + s10 - s11);
        s.bottomLeftCorner(pair_dim, pair_dim) = 0.5 * (s00 + s01 - s10 - s11);
        s.bottomRightCorner(pair_dim, pair_dim) = 0.5 * (s00 - s01 - s10 + s11);
    };

    hadamard_on_control(sigma);

    // Controlled swap of the two copies: a permutation of basis indices.
    auto cswap = [&](Eigen::Index idx) {
        if (idx < pair_dim) {
            return idx;
        }
        Eigen::Index local = idx - pair_dim;
        Eigen::Index a = local / copy_dim;
        Eigen::Index b = local % copy_dim;
        return pair_dim + b * copy_dim + a;
    };
    DenseMatrix swapped(2 * pair_dim, 2 * pair_dim);
    for (Eigen::Index i = 0; i < 2 * pair_dim; i++) {
        for (Eigen::Index j = 0; j < 2 * pair_dim; j++) {
            swapped(cswap(i), cswap(j)) = sigma(i, j);
        }
    }
    sigma = std::move(swapped);

    hadamard_on_control(sigma);

    DenseMatrix a = full_observable(obs, n);
    DenseMatrix id = DenseMatrix::Identity(copy_dim, copy_dim);
    const std::array<DenseMatrix, 2> proj = {0.5 * (id + a), 0.5 * (id - a)};  // +1, -1

    std::array<double, 8> probs{};
    for (int x_bit = 0; x_bit < 2; x_bit++) {
        // x = +1 <=> control reads 0 after the final Hadamard.
        const Eigen::Index offset = x_bit == 0 ? 0 : pair_dim;
        for (int a2_bit = 0; a2_bit < 2; a2_bit++) {
            for (int a3_bit = 0; a3_bit < 2; a3_bit++) {
                const DenseMatrix &p2 = proj[a2_bit];
                const DenseMatrix &p3 = proj[a3_bit];
                Complex acc = 0.0;
                for (Eigen::Index i = 0; i < copy_dim; i++) {
                    for (Eigen::Index ip = 0; ip < copy_dim; ip++) {
                        for (Eigen::Index j = 0; j < copy_dim; j++) {
                            for (Eigen::Index jp = 0; jp < copy_dim; jp++) {
                                acc += p2(i, ip) * p3(j, jp) *
                                       sigma(offset + ip * copy_dim + jp, offset + i * copy_dim + j);
                            }
                        }
                    }
                }
                probs[(x_bit << 2) | (a2_bit << 1) | a3_bit] = acc.real();
            }
        }
    }
    return probs;
}

std::pair<LogicalState, double> reduce_to_logical(const DenseState &rho) {
    const DenseMatrix &r = rho.matrix();
    const Eigen::Index last = r.rows() - 1;
    Mat2 m;
    m << r(0, 0), r(0, last), r(last, 0), r(last, last);
    double weight = m.trace().real();
    double leakage = 1.0 - weight;
    if (weight < 1e-14) {
        return {LogicalState::maximally_mixed(), 1.0};
    }
    return {LogicalState(hermitize(m / weight)), leakage};
}

double dense_alpha(const HamiltonianSpec &spec) {
    DenseState evolved = full_evolve(DenseState::ghz(spec.n), spec);
    DenseMatrix z0 = single_site(spec.n, 0, Pauli::Z);
    // For a pure state, tr(rho Z rho Z) = |<psi|Z|psi>|^2.
    const DenseMatrix &r = evolved.matrix();
    return (r * z0 * r * z0).trace().real();
}

namespace {

struct PatternOutcome {
    bool failed;
    bool odd_phase;
};

PatternOutcome classify(std::uint64_t pattern, int n, TieRule rule) {
    // Base-4 digit k holds the Pauli on site k: 0=I, 1=X, 2=Y, 3=Z.
    unsigned flips = 0;
    int phase_count = 0;
    for (int k = 0; k < n; k++) {
        unsigned d = (pattern >> (2 * k)) & 3u;
        if (d == 1 || d == 2) {
            flips |= 1u << (n - 1 - k);
        }
        if (d == 2 || d == 3) {
            phase_count++;
        }
    }
    const int threshold = (n + 1) / 2;
    bool failed;
    if (rule == TieRule::CountAsFailure) {
        failed = std::popcount(flips) >= threshold;
    } else {
        // The corrected pattern is either clean or the global flip.
        failed = (flips ^ correction_for(flips, n)) != 0;
    }
    return {failed, phase_count % 2 == 1};
}

double pattern_weight(std::uint64_t pattern, int n, const std::array<double, 4> &p) {
    double w = 1.0;
    for (int k = 0; k < n; k++) {
        w *= p[(pattern >> (2 * k)) & 3u];
    }
    return w;
}

void check_enumeration(int n) {
    if (n < 1 || n > 12) {
        throw std::invalid_argument("enumerate_qec_channel: n must be in [1, 12]");
    }
}

LogicalPauliChannel to_channel(const std::array<double, 4> &acc) {
    // acc indexed by failed * 2 + odd_phase.
    return {acc[0], acc[2], acc[1], acc[3]};
}

}  // namespace

LogicalPauliChannel enumerate_qec_channel_serial(int n, const PauliChannelSpec &spec, TieRule rule) {
    check_enumeration(n);
    spec.validate();
    const std::array<double, 4> p = {spec.p_i, spec.p_x, spec.p_y, spec.p_z};
    const std::uint64_t total = std::uint64_t{1} << (2 * n);
    std::array<CompensatedSum, 4> acc;
    for (std::uint64_t pattern = 0; pattern < total; pattern++) {
        PatternOutcome o = classify(pattern, n, rule);
        acc[(o.failed ? 2 : 0) + (o.odd_phase ? 1 : 0)].add(pattern_weight(pattern, n, p));
    }
    return to_channel({acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value()});
}

LogicalPauliChannel enumerate_qec_channel(int n, const PauliChannelSpec &spec, TieRule rule) {
    check_enumeration(n);
    spec.validate();
    const std::array<double, 4> p = {spec.p_i, spec.p_x, spec.p_y, spec.p_z};
    const std::int64_t total = std::int64_t{1} << (2 * n);
    // Fixed-size chunks, each compensated, combined in chunk order: the result does
    // not depend on the thread count.
    constexpr std::int64_t kChunk = 4096;
    const std::int64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<std::array<CompensatedSum, 4>> partial(static_cast<size_t>(chunks));
#pragma omp parallel for schedule(static) if (chunks > 1)
    for (std::int64_t c = 0; c < chunks; c++) {
        auto &acc = partial[static_cast<size_t>(c)];
        for (std::int64_t pattern = c * kChunk; pattern < std::min(total, (c + 1) * kChunk); pattern++) {
            PatternOutcome o = classify(static_cast<std::uint64_t>(pattern), n, rule);
            acc[(o.failed ? 2 : 0) + (o.odd_phase ? 1 : 0)].add(
                pattern_weight(static_cast<std::uint64_t>(pattern), n, p));
        }
    }
    std::array<CompensatedSum, 4> acc;
    for (const auto &part : partial) {
        for (int k = 0; k < 4; k++) {
            acc[k].add(part[k].value());
        }
    }
    return to_channel({acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value()});
}

}  // namespace qmetro::oracle
