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

#include "qmetro/noise_channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qmetro {

namespace {

constexpr double kProbTol = 1e-12;

void check_probability(double p, const char *what) {
    if (!(p >= -kProbTol && p <= 1.0 + kProbTol)) {
        throw std::invalid_argument(std::string(what) + ": probability " + std::to_string(p) + " outside [0,1]");
    }
}

void check_sum(double total, const char *what) {
    if (std::abs(total - 1.0) > kProbTol) {
        throw std::invalid_argument(std::string(what) + ": probabilities sum to " + std::to_string(total));
    }
}

Mat2 conj_by(const Mat2 &op, const Mat2 &rho) { return op * rho * op.adjoint(); }

// x^k with the convention 0^0 = 1.
double ipow(double x, int k) { return k == 0 ? 1.0 : std::pow(x, k); }

}  // namespace

PauliChannelSpec PauliChannelSpec::make(double p_x, double p_y, double p_z) {
    PauliChannelSpec spec{1.0 - p_x - p_y - p_z, p_x, p_y, p_z};
    spec.validate();
    return spec;
}

PauliChannelSpec PauliChannelSpec::dephasing(double p_z) { return make(0.0, 0.0, p_z); }

PauliChannelSpec PauliChannelSpec::flip_then_dephase(double p_x, double p_z) {
    check_probability(p_x, "flip_then_dephase");
    check_probability(p_z, "flip_then_dephase");
    // Z X = i Y, so a flip followed by a phase flip acts as Y.
    PauliChannelSpec spec{(1 - p_x) * (1 - p_z), p_x * (1 - p_z), p_x * p_z, (1 - p_x) * p_z};
    spec.validate();
    return spec;
}

void PauliChannelSpec::validate() const {
    check_probability(p_i, "PauliChannelSpec");
    check_probability(p_x, "PauliChannelSpec");
    check_probability(p_y, "PauliChannelSpec");
    check_probability(p_z, "PauliChannelSpec");
    check_sum(p_i + p_x + p_y + p_z, "PauliChannelSpec");
}

void LogicalPauliChannel::validate() const {
    check_probability(q_i, "LogicalPauliChannel");
    check_probability(q_x, "LogicalPauliChannel");
    check_probability(q_z, "LogicalPauliChannel");
    check_probability(q_xz, "LogicalPauliChannel");
    check_sum(q_i + q_x + q_z + q_xz, "LogicalPauliChannel");
}

Mat2 LogicalPauliChannel::apply(const Mat2 &rho) const {
    return q_i * rho + q_x * conj_by(logical_x(), rho) + q_z * conj_by(logical_z(), rho) +
           q_xz * conj_by(logical_y(), rho);
}

void CompensatedSum::add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
        comp_ += (sum_ - t) + v;
    } else {
        comp_ += (v - t) + sum_;
    }
    sum_ = t;
}

double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; i++) {
        c = c * (n - k + i) / i;
    }
    return std::round(c);
}

double accumulate_rate(double p1, long t) {
    check_probability(p1, "accumulate_rate");
    if (t < 0) {
        throw std::invalid_argument("accumulate_rate: t must be >= 0");
    }
    if (t == 0) {
        return 0.0;
    }
    if (p1 >= 1.0) {
        return 1.0;
    }
    return -std::expm1(static_cast<double>(t) * std::log1p(-p1));
}

double p_odd(int n, double p_z) {
    if (n < 1) {
        throw std::invalid_argument("p_odd: n must be >= 1");
    }
    check_probability(p_z, "p_odd");
    double base = 1.0 - 2.0 * p_z;
    if (base > 0.0) {
        // (1 - e^{n log(1-2p)}) / 2 without cancellation for tiny p.
        return -0.5 * std::expm1(n * std::log1p(-2.0 * p_z));
    }
    return 0.5 * (1.0 - ipow(base, n));
}

LogicalState dephase_logical(const LogicalState &state, double p) {
    check_probability(p, "dephase_logical");
    Mat2 m = state.matrix();
    m(0, 1) *= 1.0 - 2.0 * p;
    m(1, 0) *= 1.0 - 2.0 * p;
    return LogicalState(m);
}

double residual_x_rate(int n, double p_x) {
    if (n < 1) {
        throw std::invalid_argument("residual_x_rate: n must be >= 1");
    }
    check_probability(p_x, "residual_x_rate");
    int threshold = (n + 1) / 2;
    CompensatedSum sum;
    for (int i = threshold; i <= n; i++) {
        sum.add(binomial_coefficient(n, i) * ipow(p_x, i) * ipow(1.0 - p_x, n - i));
    }
    return sum.value();
}

LogicalPauliChannel qec_effective_channel(int n, const PauliChannelSpec &spec, TieRule rule) {
    if (n < 1) {
        throw std::invalid_argument("qec_effective_channel: n must be >= 1");
    }
    spec.validate();
    const int threshold = (n + 1) / 2;
    const bool split_tie = rule == TieRule::SyndromeDecoder && n % 2 == 0;

    // Per qubit, the generating function F(x, y) evaluated at y = +1 and y = -1:
    // F(x, 1) = (p_I + p_z) + (p_x + p_y) x, F(x, -1) = (p_I - p_z) + (p_x - p_y) x.
    const double flip_plus = spec.p_x + spec.p_y;
    const double keep_plus = spec.p_i + spec.p_z;
    const double flip_minus = spec.p_x - spec.p_y;
    const double keep_minus = spec.p_i - spec.p_z;

    CompensatedSum ok_plus, ok_minus, bad_plus, bad_minus;
    for (int a = 0; a <= n; a++) {
        double c = binomial_coefficient(n, a);
        double plus = c * ipow(flip_plus, a) * ipow(keep_plus, n - a);
        double minus = c * ipow(flip_minus, a) * ipow(keep_minus, n - a);
        double ok_fraction = a < threshold ? 1.0 : 0.0;
        if (split_tie && a == threshold) {
            // C(n-1, n/2) of the C(n, n/2) tie patterns leave qubit 0 untouched.
            ok_fraction = 0.5;
        }
        if (ok_fraction > 0.0) {
            ok_plus.add(ok_fraction * plus);
            ok_minus.add(ok_fraction * minus);
        }
        if (ok_fraction < 1.0) {
            bad_plus.add((1.0 - ok_fraction) * plus);
            bad_minus.add((1.0 - ok_fraction) * minus);
        }
    }

    LogicalPauliChannel ch;
    ch.q_i = 0.5 * (ok_plus.value() + ok_minus.value());
    ch.q_z = std::max(0.0, 0.5 * (ok_plus.value() - ok_minus.value()));
    ch.q_x = 0.5 * (bad_plus.value() + bad_minus.value());
    ch.q_xz = std::max(0.0, 0.5 * (bad_plus.value() - bad_minus.value()));
    ch.validate();
    return ch;
}

LogicalPauliChannel compose_channel(const LogicalPauliChannel &ch, long t) {
    ch.validate();
    if (t < 0) {
        throw std::invalid_argument("compose_channel: t must be >= 0");
    }
    if (t == 0) {
        return LogicalPauliChannel::identity();
    }
    const double q_y = ch.q_xz;
    // Transfer eigenvalue for Pauli P is 1 - 2 * (weight of Paulis anticommuting with P).
    const std::array<double, 3> anti = {q_y + ch.q_z, ch.q_x + ch.q_z, ch.q_x + q_y};  // X, Y, Z
    std::array<double, 3> decay{};  // 1 - lambda^t
    for (int k = 0; k < 3; k++) {
        double lambda = 1.0 - 2.0 * anti[k];
        if (lambda > 0.0) {
            decay[k] = -std::expm1(static_cast<double>(t) * std::log1p(-2.0 * anti[k]));
        } else {
            decay[k] = 1.0 - std::pow(lambda, static_cast<double>(t));
        }
    }
    LogicalPauliChannel out;
    out.q_x = std::max(0.0, 0.25 * (decay[1] + decay[2] - decay[0]));
    out.q_xz = std::max(0.0, 0.25 * (decay[0] + decay[2] - decay[1]));
    out.q_z = std::max(0.0, 0.25 * (decay[0] + decay[1] - decay[2]));
    out.q_i = 1.0 - out.q_x - out.q_xz - out.q_z;
    return out;
}

PauliChannelSpec accumulate_components(const PauliChannelSpec &spec, long t) {
    spec.validate();
    const double a = accumulate_rate(spec.p_x, t);
    const double b = accumulate_rate(spec.p_y, t);
    const double c = accumulate_rate(spec.p_z, t);
    // Single-qubit Paulis multiply like the logical ones, with Y in the XZ slot.
    LogicalPauliChannel ch = then(then({1.0 - a, a, 0.0, 0.0}, {1.0 - b, 0.0, 0.0, b}), {1.0 - c, 0.0, c, 0.0});
    PauliChannelSpec out{ch.q_i, ch.q_x, ch.q_xz, ch.q_z};
    out.validate();
    return out;
}

LogicalPauliChannel then(const LogicalPauliChannel &first, const LogicalPauliChannel &second) {
    // Klein-group convolution with labels I=00, X=10, Z=01, XZ=11.
    std::array<double, 4> a = {first.q_i, first.q_x, first.q_z, first.q_xz};
    std::array<double, 4> b = {second.q_i, second.q_x, second.q_z, second.q_xz};
    std::array<double, 4> c{};
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            c[i ^ j] += a[i] * b[j];
        }
    }
    return {c[0], c[1], c[2], c[3]};
}

namespace {

struct SplitChannel {
    LogicalPauliChannel keep;  // q_i, q_z only
    LogicalPauliChannel flip;  // q_x, q_xz only
};

SplitChannel split(const LogicalPauliChannel &ch) {
    return {{ch.q_i, 0.0, ch.q_z, 0.0}, {0.0, ch.q_x, 0.0, ch.q_xz}};
}

}  // namespace

BranchedState evolve_interleaved(const LogicalState &initial, const HamiltonianSpec &spec,
                                 const LogicalPauliChannel &channel) {
    channel.validate();
    BranchedState out;
    out.clean = initial.matrix();
    if (spec.t == 0) {
        return out;
    }
    const Mat2 step = logical_unitary(spec.with_time(1));
    const SplitChannel parts = split(channel);
    for (long k = 0; k < spec.t; k++) {
        Mat2 clean = step * out.clean * step.adjoint();
        Mat2 flipped = step * out.flipped * step.adjoint();
        out.clean = parts.keep.apply(clean);
        out.flipped = channel.apply(flipped) + parts.flip.apply(clean);
    }
    return out;
}

BranchedState evolve_then_apply(const LogicalState &initial, const HamiltonianSpec &spec,
                                const LogicalPauliChannel &channel) {
    channel.validate();
    Mat2 evolved = evolve(initial, spec).matrix();
    const SplitChannel parts = split(channel);
    return {parts.keep.apply(evolved), parts.flip.apply(evolved)};
}

}  // namespace qmetro
