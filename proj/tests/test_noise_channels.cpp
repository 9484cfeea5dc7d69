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

#include <cmath>
#include <random>

#include "qmetro/noise_channels.hpp"
#include "qmetro/oracle_sim.hpp"

namespace qmetro {
namespace {

double odd_weight_sum(int n, double p) {
    double acc = 0.0;
    for (int k = 1; k <= n; k += 2) {
        acc += binomial_coefficient(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
    }
    return acc;
}

double channel_sum(const LogicalPauliChannel &c) { return c.q_i + c.q_x + c.q_z + c.q_xz; }

TEST(PauliChannelSpec, Validation) {
    EXPECT_THROW(PauliChannelSpec::make(0.6, 0.6, 0.0), std::invalid_argument);
    EXPECT_THROW(PauliChannelSpec::make(-0.1, 0.0, 0.0), std::invalid_argument);
    PauliChannelSpec s = PauliChannelSpec::make(0.1, 0.2, 0.3);
    EXPECT_NEAR(s.p_i, 0.4, 1e-15);
}

TEST(AccumulateRate, Examples) {
    EXPECT_DOUBLE_EQ(accumulate_rate(0.0005, 1), 0.0005);
    EXPECT_EQ(accumulate_rate(0.3, 0), 0.0);
    double keep = 1.0;
    for (int i = 0; i < 100; i++) {
        keep *= 1.0 - 0.0005;
    }
    EXPECT_NEAR(accumulate_rate(0.0005, 100), 1.0 - keep, 1e-14);
    EXPECT_NEAR(accumulate_rate(0.0005, 100), 0.0487825, 1e-7);
}

TEST(AccumulateRate, MonotoneInTime) {
    double prev = 0.0;
    for (long t = 0; t < 2000; t += 7) {
        double v = accumulate_rate(0.001, t);
        EXPECT_GE(v, prev);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
}

TEST(POdd, Examples) {
    EXPECT_NEAR(p_odd(1, 0.1), 0.1, 1e-15);
    EXPECT_EQ(p_odd(3, 0.0), 0.0);
    EXPECT_NEAR(p_odd(3, 0.1), 0.244, 1e-15);
}

TEST(POdd, MatchesOddWeightSum) {
    for (int n = 1; n <= 20; n++) {
        for (double p : {1e-4, 0.01, 0.1, 0.3, 0.5}) {
            EXPECT_NEAR(p_odd(n, p), odd_weight_sum(n, p), 1e-14) << n << " " << p;
        }
    }
}

TEST(POdd, ParityIdentityWithAccumulation) {
    for (int n : {1, 3, 8}) {
        for (long t : {1L, 10L, 300L}) {
            double p1 = 0.0005;
            double lhs = 1.0 - 2.0 * p_odd(n, accumulate_rate(p1, t));
            double rhs = std::pow(2.0 * std::pow(1.0 - p1, t) - 1.0, n);
            EXPECT_NEAR(lhs, rhs, 1e-12);
        }
    }
}

TEST(DephaseLogical, Examples) {
    LogicalState rho = LogicalState::from_amplitudes(0.6, Complex(0.0, 0.8));
    EXPECT_LT((dephase_logical(rho, 0.0).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-15);
    Mat2 half = Mat2::Identity() * 0.5;
    EXPECT_LT((dephase_logical(ghz_probe(), 0.5).matrix() - half).cwiseAbs().maxCoeff(), 1e-15);
    for (double p : {0.01, 0.1, 0.244}) {
        LogicalState out = dephase_logical(rho, p);
        EXPECT_NEAR(dephase_logical(ghz_probe(), p).purity(), 1.0 - 2.0 * p + 2.0 * p * p, 1e-14);
        EXPECT_NEAR(std::abs(out(0, 1)), (1.0 - 2.0 * p) * std::abs(rho(0, 1)), 1e-15);
        EXPECT_NEAR(out(0, 0).real(), rho(0, 0).real(), 1e-15);
    }
}

TEST(ResidualXRate, Examples) {
    EXPECT_NEAR(residual_x_rate(3, 0.0005), 7.4975e-7, 7.4975e-7 * 1e-4);
    EXPECT_EQ(residual_x_rate(5, 0.0), 0.0);
    EXPECT_NEAR(residual_x_rate(1, 0.3), 0.3, 1e-15);
}

TEST(ResidualXRate, NonIncreasingInOddN) {
    for (double p : {1e-4, 0.01, 0.2, 0.45}) {
        double prev = 1.0;
        for (int n = 1; n <= 15; n += 2) {
            double v = residual_x_rate(n, p);
            EXPECT_LE(v, prev) << n << " " << p;
            prev = v;
        }
    }
}

TEST(QecEffectiveChannel, MisinterpretationRates) {
    auto failure = [](int n, double p) { return qec_effective_channel(n, PauliChannelSpec::make(p, p, p)).failure(); };
    EXPECT_NEAR(failure(3, 1e-4), 1.20e-7, 1.20e-7 * 0.01);
    EXPECT_NEAR(failure(3, 2.5e-3), 7.48e-5, 7.48e-5 * 0.01);
    EXPECT_NEAR(failure(8, 1e-4), 1.12e-13, 1.12e-13 * 0.02);
    EXPECT_NEAR(failure(8, 2.5e-3), 4.31e-8, 4.31e-8 * 0.02);
}

TEST(QecEffectiveChannel, PureDephasingReducesToParity) {
    for (int n = 1; n <= 12; n++) {
        LogicalPauliChannel c = qec_effective_channel(n, PauliChannelSpec::dephasing(0.07));
        EXPECT_EQ(c.q_x, 0.0);
        EXPECT_EQ(c.q_xz, 0.0);
        EXPECT_NEAR(c.q_z, p_odd(n, 0.07), 1e-15);
    }
}

TEST(QecEffectiveChannel, ProbabilitiesNormalized) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0 / 3.0);
    for (int k = 0; k < 200; k++) {
        int n = 1 + k % 20;
        for (TieRule rule : {TieRule::CountAsFailure, TieRule::SyndromeDecoder}) {
            LogicalPauliChannel c = qec_effective_channel(n, PauliChannelSpec::make(u(rng), u(rng), u(rng)), rule);
            EXPECT_NEAR(channel_sum(c), 1.0, 1e-12);
            EXPECT_GE(std::min({c.q_i, c.q_x, c.q_z, c.q_xz}), 0.0);
        }
    }
}

TEST(QecEffectiveChannel, MatchesEnumeration) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 0.2);
    for (int n = 1; n <= 4; n++) {
        for (int k = 0; k < 20; k++) {
            PauliChannelSpec spec = PauliChannelSpec::make(u(rng), u(rng), u(rng));
            for (TieRule rule : {TieRule::CountAsFailure, TieRule::SyndromeDecoder}) {
                LogicalPauliChannel a = qec_effective_channel(n, spec, rule);
                LogicalPauliChannel b = oracle::enumerate_qec_channel_serial(n, spec, rule);
                EXPECT_NEAR(a.q_i, b.q_i, 1e-14);
                EXPECT_NEAR(a.q_x, b.q_x, 1e-14);
                EXPECT_NEAR(a.q_z, b.q_z, 1e-14);
                EXPECT_NEAR(a.q_xz, b.q_xz, 1e-14);
            }
        }
    }
}

TEST(QecEffectiveChannel, TieRulesAgreeForOddN) {
    PauliChannelSpec spec = PauliChannelSpec::make(0.03, 0.02, 0.01);
    for (int n = 1; n <= 15; n += 2) {
        LogicalPauliChannel a = qec_effective_channel(n, spec, TieRule::CountAsFailure);
        LogicalPauliChannel b = qec_effective_channel(n, spec, TieRule::SyndromeDecoder);
        EXPECT_NEAR(a.failure(), b.failure(), 1e-16);
    }
    // Even n: counting ties as failures is strictly more pessimistic.
    EXPECT_GT(qec_effective_channel(4, spec, TieRule::CountAsFailure).failure(),
              qec_effective_channel(4, spec, TieRule::SyndromeDecoder).failure());
}

TEST(ComposeChannel, Examples) {
    LogicalPauliChannel ch{0.9, 0.03, 0.05, 0.02};
    LogicalPauliChannel one = compose_channel(ch, 1);
    EXPECT_NEAR(one.q_x, ch.q_x, 1e-15);
    EXPECT_NEAR(one.q_z, ch.q_z, 1e-15);
    EXPECT_NEAR(one.q_xz, ch.q_xz, 1e-15);
    LogicalPauliChannel zero = compose_channel(ch, 0);
    EXPECT_NEAR(zero.q_i, 1.0, 1e-15);
    LogicalPauliChannel id = compose_channel(LogicalPauliChannel::identity(), 1000);
    EXPECT_NEAR(id.q_i, 1.0, 1e-15);
}

TEST(ComposeChannel, BinarySymmetricRecursion) {
    const double p = 0.013;
    LogicalPauliChannel z{1.0 - p, 0.0, p, 0.0};
    double flip = 0.0;
    for (long t = 1; t <= 200; t++) {
        flip = flip * (1.0 - p) + (1.0 - flip) * p;
        LogicalPauliChannel c = compose_channel(z, t);
        EXPECT_NEAR(c.q_z, flip, 1e-13);
        EXPECT_NEAR(c.q_z, 0.5 * (1.0 - std::pow(1.0 - 2.0 * p, t)), 1e-13);
        EXPECT_EQ(c.q_x, 0.0);
    }
}

TEST(ComposeChannel, SemigroupProperty) {
    LogicalPauliChannel ch{0.95, 0.01, 0.03, 0.01};
    for (auto [a, b] : {std::pair{3L, 4L}, std::pair{10L, 90L}, std::pair{0L, 5L}}) {
        LogicalPauliChannel lhs = compose_channel(ch, a + b);
        LogicalPauliChannel rhs = then(compose_channel(ch, a), compose_channel(ch, b));
        EXPECT_NEAR(lhs.q_i, rhs.q_i, 1e-12);
        EXPECT_NEAR(lhs.q_x, rhs.q_x, 1e-12);
        EXPECT_NEAR(lhs.q_z, rhs.q_z, 1e-12);
        EXPECT_NEAR(lhs.q_xz, rhs.q_xz, 1e-12);
    }
}

TEST(AccumulateComponents, SingleComponentFollowsAccumulationLaw) {
    PauliChannelSpec s = accumulate_components(PauliChannelSpec::dephasing(0.0005), 100);
    EXPECT_NEAR(s.p_z, accumulate_rate(0.0005, 100), 1e-15);
    EXPECT_EQ(s.p_x, 0.0);
    PauliChannelSpec m = accumulate_components(PauliChannelSpec::make(0.001, 0.002, 0.003), 50);
    EXPECT_NEAR(m.p_i + m.p_x + m.p_y + m.p_z, 1.0, 1e-12);
}

TEST(EvolveInterleaved, ChannelAfterEveryStep) {
    HamiltonianSpec spec = HamiltonianSpec::single(3, 0.002, 40);
    LogicalPauliChannel ch = qec_effective_channel(3, PauliChannelSpec::flip_then_dephase(0.001, 0.001));
    BranchedState b = evolve_interleaved(ghz_probe(), spec, ch);
    Mat2 rho = ghz_probe().matrix();
    for (long k = 0; k < spec.t; k++) {
        rho = ch.apply(evolve(LogicalState(rho), spec.with_time(1)).matrix());
    }
    EXPECT_LT((b.total() - rho).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(b.clean_weight(), std::pow(1.0 - ch.failure(), 40), 1e-13);
}

}  // namespace
}  // namespace qmetro
