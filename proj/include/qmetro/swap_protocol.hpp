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

#ifndef QMETRO_SWAP_PROTOCOL_HPP
#define QMETRO_SWAP_PROTOCOL_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "qmetro/logical_core.hpp"

namespace qmetro {

/// One swap-test shot: control readout x and the two copy readouts, each +1 or -1.
struct Shot {
    int x;
    int a2;
    int a3;
};

/// Outcome index: bit 2 set for x = -1, bit 1 for a2 = -1, bit 0 for a3 = -1.
constexpr int outcome_index(int x, int a2, int a3) { return ((x < 0) << 2) | ((a2 < 0) << 1) | (a3 < 0); }
constexpr Shot outcome_shot(int index) {
    return {(index & 4) ? -1 : 1, (index & 2) ? -1 : 1, (index & 1) ? -1 : 1};
}

struct SwapDistribution {
    std::array<double, 8> probs{};

    double prob(int x, int a2, int a3) const { return probs[outcome_index(x, a2, a3)]; }
    /// E[f(x, a2, a3)] under the distribution.
    template <typename F>
    double mean(F &&f) const {
        double acc = 0.0;
        for (int k = 0; k < 8; k++) {
            Shot s = outcome_shot(k);
            acc += probs[k] * f(s.x, s.a2, s.a3);
        }
        return acc;
    }
};

struct ShotRecord {
    std::vector<std::uint8_t> outcomes;  // outcome indices
    std::uint64_t seed = 0;

    long nu() const { return static_cast<long>(outcomes.size()); }
    Shot shot(long i) const { return outcome_shot(outcomes[i]); }
};

using OutcomeCounts = std::array<long, 8>;

/// Sample means: A_hat = <(a2 + a3)/2>, X_hat = <x>, XA_hat = <x (a2 + a3)/2>.
struct MomentEstimates {
    double A_hat = 0.0;
    double X_hat = 0.0;
    double XA_hat = 0.0;
};

/// P(x, a2, a3) = [tr(P_a2 rho) tr(P_a3 rho) + x tr(P_a2 rho P_a3 rho)] / 2 with P_a the
/// eigenprojectors of A. Throws std::invalid_argument unless A^2 = I.
SwapDistribution joint_distribution(const LogicalState &rho, const LogicalObservable &obs);

/// Counter-based uniform draw for shot `index` of stream `seed`.
double shot_uniform(std::uint64_t seed, std::uint64_t index);
int draw_outcome(const SwapDistribution &dist, double u);

/// Draws nu shots. Shot i depends only on (seed, i), so any split of the
/// index range reproduces the same record.
ShotRecord sample_shots(const SwapDistribution &dist, long nu, std::uint64_t seed);

/// Histogram of the shots sample_shots would produce. Serial reference.
OutcomeCounts sample_counts_serial(const SwapDistribution &dist, long nu, std::uint64_t seed);
/// Same histogram, OpenMP-parallel over shot indices.
OutcomeCounts sample_counts(const SwapDistribution &dist, long nu, std::uint64_t seed);

MomentEstimates estimate_moments(const ShotRecord &rec);
MomentEstimates estimate_moments(const OutcomeCounts &counts);
/// Infinite-shot limit: the moments of the distribution itself.
MomentEstimates exact_moments(const SwapDistribution &dist);
/// Same limit computed from traces: (tr(A rho), tr(rho^2), tr(A rho^2)).
MomentEstimates exact_moments(const LogicalState &rho, const LogicalObservable &obs);

}  // namespace qmetro

#endif
