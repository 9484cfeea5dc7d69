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

#include "qmetro/swap_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmetro {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

void check_nu(long nu) {
    if (nu < 1) {
        throw std::invalid_argument("swap protocol: shot count must be >= 1");
    }
}

}  // namespace

SwapDistribution joint_distribution(const LogicalState &rho, const LogicalObservable &obs) {
    const Mat2 &a = obs.matrix;
    if ((a * a - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-12 ||
        (a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("joint_distribution: observable must be Hermitian with eigenvalues +-1");
    }
    const Mat2 &r = rho.matrix();
    const std::array<Mat2, 2> proj = {0.5 * (Mat2::Identity() + a), 0.5 * (Mat2::Identity() - a)};
    std::array<Mat2, 2> pr = {proj[0] * r, proj[1] * r};

    SwapDistribution dist;
    for (int k = 0; k < 8; k++) {
        Shot s = outcome_shot(k);
        const Mat2 &p2 = pr[s.a2 < 0];
        const Mat2 &p3 = pr[s.a3 < 0];
        double independent = p2.trace().real() * p3.trace().real();
        double overlap = (p2 * p3).trace().real();
        dist.probs[k] = std::max(0.0, 0.5 * (independent + s.x * overlap));
    }
    return dist;
}

double shot_uniform(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t bits = splitmix64(seed + (index + 1) * kGolden);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

int draw_outcome(const SwapDistribution &dist, double u) {
    double cumulative = 0.0;
    int last = 0;
    for (int k = 0; k < 8; k++) {
        if (dist.probs[k] <= 0.0) {
            continue;
        }
        cumulative += dist.probs[k];
        last = k;
        if (u < cumulative) {
            return k;
        }
    }
    return last;
}

ShotRecord sample_shots(const SwapDistribution &dist, long nu, std::uint64_t seed) {
    check_nu(nu);
    ShotRecord rec;
    rec.seed = seed;
    rec.outcomes.resize(nu);
    for (long i = 0; i < nu; i++) {
        rec.outcomes[i] = static_cast<std::uint8_t>(draw_outcome(dist, shot_uniform(seed, i)));
    }
    return rec;
}

OutcomeCounts sample_counts_serial(const SwapDistribution &dist, long nu, std::uint64_t seed) {
    check_nu(nu);
    OutcomeCounts counts{};
    for (long i = 0; i < nu; i++) {
        counts[draw_outcome(dist, shot_uniform(seed, i))]++;
    }
    return counts;
}

OutcomeCounts sample_counts(const SwapDistribution &dist, long nu, std::uint64_t seed) {
    check_nu(nu);
    long c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0, c7 = 0;
#pragma omp parallel for schedule(static) reduction(+ : c0, c1, c2, c3, c4, c5, c6, c7) if (nu > 65536)
    for (long i = 0; i < nu; i++) {
        switch (draw_outcome(dist, shot_uniform(seed, i))) {
            case 0: c0++; break;
            case 1: c1++; break;
            case 2: c2++; break;
            case 3: c3++; break;
            case 4: c4++; break;
            case 5: c5++; break;
            case 6: c6++; break;
            default: c7++; break;
        }
    }
    return {c0, c1, c2, c3, c4, c5, c6, c7};
}

MomentEstimates estimate_moments(const OutcomeCounts &counts) {
    long nu = 0;
    for (long c : counts) {
        nu += c;
    }
    check_nu(nu);
    long sum_a2 = 0, sum_x = 0, sum_xa2 = 0;  // sums of 2 * a_mean and friends, kept integral
    for (int k = 0; k < 8; k++) {
        Shot s = outcome_shot(k);
        sum_a2 += counts[k] * (s.a2 + s.a3);
        sum_x += counts[k] * s.x;
        sum_xa2 += counts[k] * s.x * (s.a2 + s.a3);
    }
    double denom = static_cast<double>(nu);
    return {0.5 * sum_a2 / denom, sum_x / denom, 0.5 * sum_xa2 / denom};
}

MomentEstimates estimate_moments(const ShotRecord &rec) {
    OutcomeCounts counts{};
    for (std::uint8_t o : rec.outcomes) {
        counts[o]++;
    }
    return estimate_moments(counts);
}

MomentEstimates exact_moments(const SwapDistribution &dist) {
    return {dist.mean([](int, int a2, int a3) { return 0.5 * (a2 + a3); }),
            dist.mean([](int x, int, int) { return static_cast<double>(x); }),
            dist.mean([](int x, int a2, int a3) { return 0.5 * x * (a2 + a3); })};
}

MomentEstimates exact_moments(const LogicalState &rho, const LogicalObservable &obs) {
    const Mat2 &r = rho.matrix();
    Mat2 r2 = r * r;
    return {(obs.matrix * r).trace().real(), r2.trace().real(), (obs.matrix * r2).trace().real()};
}

}  // namespace qmetro
