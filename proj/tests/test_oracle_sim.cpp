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

#include <gtest/gtest.h>

#include "qmetro/noise_channels.hpp"
#include "qmetro/oracle_sim.hpp"
#include "qmetro/swap_protocol.hpp"

namespace qmetro::oracle {
namespace {

double max_abs(const DenseMatrix &m) { return m.cwiseAbs().maxCoeff(); }

// X on `site` applied to the GHZ vector.
DenseState flipped_ghz(int n, std::initializer_list<int> sites) {
    DenseMatrix op = DenseMatrix::Identity(1 << n, 1 << n);
    for (int s : sites) {
        op = single_site(n, s, Pauli::X) * op;
    }
    return DenseState(n, op * DenseState::ghz(n).matrix() * op.adjoint());
}

TEST(DenseState, Validation) {
    EXPECT_THROW(DenseState(5, DenseMatrix::Identity(32, 32) / 32.0), std::invalid_argument);
    EXPECT_THROW(DenseState(2, DenseMatrix::Identity(4, 4)), std::invalid_argument);
    EXPECT_THROW(DenseState(2, DenseMatrix::Identity(8, 8) / 8.0), std::invalid_argument);
    EXPECT_THROW(single_site(3, 3, Pauli::X), std::out_of_range);
}

TEST(FullEvolve, Examples) {
    DenseState ghz = DenseState::ghz(3);
    EXPECT_LT(max_abs(full_evolve(ghz, HamiltonianSpec::single(3, 0.3, 0)).matrix() - ghz.matrix()), 1e-15);

    HamiltonianSpec spec = HamiltonianSpec::single(3, 0.001, 100);
    auto [logical, leakage] = reduce_to_logical(full_evolve(ghz, spec));
    EXPECT_NEAR(leakage, 0.0, 1e-14);
    EXPECT_LT((logical.matrix() - evolve(ghz_probe(), spec).matrix()).cwiseAbs().maxCoeff(), 1e-12);

    DenseState zero = DenseState::basis(3, 0);
    EXPECT_LT(max_abs(full_evolve(zero, spec).matrix() - zero.matrix()), 1e-13);
}

TEST(ApplySiteChannel, Examples) {
    DenseState ghz = DenseState::ghz(3);
    EXPECT_LT(max_abs(apply_site_channel(ghz, PauliChannelSpec{}, 1).matrix() - ghz.matrix()), 1e-15);
    EXPECT_THROW(apply_site_channel(ghz, PauliChannelSpec{}, 3), std::out_of_range);

    auto [flipped, leak] = reduce_to_logical(apply_site_channel(ghz, PauliChannelSpec::dephasing(1.0), 0));
    EXPECT_NEAR(flipped(0, 1).real(), -0.5, 1e-15);
    EXPECT_NEAR(leak, 0.0, 1e-15);

    auto [deph, leak2] = reduce_to_logical(apply_all_sites(ghz, PauliChannelSpec::dephasing(0.1)));
    const double p = 0.244;
    EXPECT_NEAR(deph.purity(), 1.0 - 2.0 * p + 2.0 * p * p, 1e-14);
}

TEST(QecRoundFull, Examples) {
    DenseState ghz = DenseState::ghz(3);
    EXPECT_LT(max_abs(qec_round_full(ghz).matrix() - ghz.matrix()), 1e-15);
    EXPECT_LT(max_abs(qec_round_full(flipped_ghz(3, {0})).matrix() - ghz.matrix()), 1e-15);
    // Two flips decode to the complementary pattern: the net effect is X on every site.
    DenseState all = flipped_ghz(3, {0, 1, 2});
    EXPECT_LT(max_abs(qec_round_full(flipped_ghz(3, {0, 1})).matrix() - all.matrix()), 1e-15);

    auto [logical, leak] = reduce_to_logical(flipped_ghz(3, {0}));
    EXPECT_NEAR(leak, 1.0, 1e-15);
}

TEST(QecRoundFull, TracePreservingAndIdempotent) {
    for (int n = 2; n <= 4; n++) {
        DenseState rho = apply_all_sites(full_evolve(DenseState::ghz(n), HamiltonianSpec::two_param(n, 0.2, 0.1, 3)),
                                         PauliChannelSpec::make(0.05, 0.04, 0.03));
        DenseState once = qec_round_full(rho);
        EXPECT_NEAR(once.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_NEAR(reduce_to_logical(once).second, 0.0, 1e-12);
        EXPECT_LT(max_abs(qec_round_full(once).matrix() - once.matrix()), 1e-12);
    }
}

TEST(SwapTestFull, Examples) {
    // Pure state: the control never reads -1.
    auto p = swap_test_full(full_evolve(DenseState::ghz(3), HamiltonianSpec::single(3, 0.01, 5)),
                            ObservableName::GHZyProjector);
    for (int k = 4; k < 8; k++) {
        EXPECT_NEAR(p[k], 0.0, 1e-14);
    }
    DenseState mixed = DenseState::embed(3, LogicalState::maximally_mixed());
    auto q = swap_test_full(mixed, ObservableName::GHZyProjector);
    EXPECT_NEAR(q[4] + q[5] + q[6] + q[7], 0.25, 1e-14);

    DenseState deph = qec_round_full(apply_all_sites(DenseState::ghz(3), PauliChannelSpec::dephasing(0.1)));
    LogicalState logical = reduce_to_logical(deph).first;
    auto dense = swap_test_full(deph, ObservableName::GHZyProjector);
    SwapDistribution analytic = joint_distribution(logical, restrict_observable(ObservableName::GHZyProjector, 3));
    for (int k = 0; k < 8; k++) {
        EXPECT_NEAR(dense[k], analytic.probs[k], 1e-12);
    }
}

TEST(ReduceToLogical, CodespaceStateHasNoLeakage) {
    DenseState rho = DenseState::embed(4, LogicalState::from_amplitudes(0.6, Complex(0.0, 0.8)));
    auto [logical, leak] = reduce_to_logical(rho);
    EXPECT_NEAR(leak, 0.0, 1e-15);
    EXPECT_NEAR(logical(0, 0).real(), 0.36, 1e-15);
}

TEST(Enumeration, ParallelMatchesSerial) {
    PauliChannelSpec spec = PauliChannelSpec::make(0.02, 0.03, 0.04);
    for (int n = 1; n <= 8; n++) {
        for (TieRule rule : {TieRule::CountAsFailure, TieRule::SyndromeDecoder}) {
            LogicalPauliChannel a = enumerate_qec_channel_serial(n, spec, rule);
            LogicalPauliChannel b = enumerate_qec_channel(n, spec, rule);
            EXPECT_NEAR(a.q_i, b.q_i, 1e-15);
            EXPECT_NEAR(a.q_x, b.q_x, 1e-15);
            EXPECT_NEAR(a.q_z, b.q_z, 1e-15);
            EXPECT_NEAR(a.q_xz, b.q_xz, 1e-15);
        }
    }
}

TEST(DenseAlpha, PeakValue) {
    // sin(Omega t) = 1 with Omega = 1.25 at n = 3, lambda = (1, 0.25) scaled to unit steps.
    const double s = 3.14159265358979323846 / 2.0 / 1.25;
    EXPECT_NEAR(dense_alpha(HamiltonianSpec::two_param(3, s, 0.25 * s, 1)), 0.9216, 1e-12);
}

}  // namespace
}  // namespace qmetro::oracle
