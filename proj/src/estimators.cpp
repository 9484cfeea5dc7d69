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

#include "qmetro/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmetro {

namespace {

constexpr double kDegenerate = 1e-12;

void check_nt(int n, long t) {
    if (n < 1 || t < 1) {
        throw std::invalid_argument("estimator: need n >= 1 and t >= 1");
    }
}

// Phase consistent with sin(phase) = arg, on the branch nearest the reference phase.
double select_branch(double principal, std::optional<double> reference_phase) {
    if (!reference_phase) {
        return principal;
    }
    const double two_pi = 2.0 * std::numbers::pi;
    const double target = *reference_phase;
    double best = principal;
    double best_dist = std::numeric_limits<double>::infinity();
    for (double base : {principal, std::numbers::pi - principal}) {
        double k = std::round((target - base) / two_pi);
        double candidate = base + k * two_pi;
        double dist = std::abs(candidate - target);
        if (dist < best_dist) {
            best = candidate;
            best_dist = dist;
        }
    }
    return best;
}

EstimateReport from_sine(Method method, double arg, int n, long t, std::optional<double> reference) {
    EstimateReport r;
    r.method = method;
    if (std::isnan(arg)) {
        r.failed = true;
        return r;
    }
    if (std::abs(arg) > 1.0) {
        r.clamped = true;
        arg = std::copysign(1.0, arg);
    }
    const double scale = 2.0 * n * static_cast<double>(t);
    std::optional<double> ref_phase;
    if (reference) {
        ref_phase = scale * *reference;
    }
    r.estimate = {select_branch(std::asin(arg), ref_phase) / scale};
    return r;
}

EstimateReport failed_report(Method method) {
    EstimateReport r;
    r.method = method;
    r.failed = true;
    return r;
}

}  // namespace

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Naive:
            return "naive";
        case Method::VSP:
            return "vsp";
        case Method::SwapTest:
            return "swap";
        case Method::SwapTestAlpha:
            return "swap_alpha";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::Naive, Method::VSP, Method::SwapTest, Method::SwapTestAlpha}) {
        if (method_name(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

EstimateReport lambda_swap(const MomentEstimates &m, int n, long t, std::optional<double> reference) {
    check_nt(n, t);
    double purity_signal = 2.0 * m.X_hat - 1.0;
    if (!(purity_signal > kDegenerate)) {
        return failed_report(Method::SwapTest);
    }
    return from_sine(Method::SwapTest, m.A_hat / std::sqrt(purity_signal), n, t, reference);
}

EstimateReport lambda_naive(const MomentEstimates &m, int n, long t, std::optional<double> reference) {
    check_nt(n, t);
    return from_sine(Method::Naive, m.A_hat, n, t, reference);
}

EstimateReport lambda_vsp(const MomentEstimates &m, int n, long t, std::optional<double> reference) {
    check_nt(n, t);
    if (!(m.X_hat > kDegenerate)) {
        return failed_report(Method::VSP);
    }
    return from_sine(Method::VSP, m.XA_hat / m.X_hat, n, t, reference);
}

double p_odd_from_x(double x_hat) {
    double s = 2.0 * x_hat - 1.0;
    if (!(s > 0.0)) {
        throw std::domain_error("p_odd_from_x: 2X - 1 must be positive, got " + std::to_string(s));
    }
    return 0.5 * (1.0 - std::sqrt(s));
}

double p_odd_from_x_alpha(double x_hat, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::domain_error("p_odd_from_x_alpha: alpha must lie in [0, 1)");
    }
    double radicand = (1.0 - alpha) * (2.0 * x_hat - 1.0 - alpha);
    if (radicand < 0.0) {
        throw std::domain_error("p_odd_from_x_alpha: negative radicand");
    }
    return (1.0 - alpha - std::sqrt(radicand)) / (2.0 * (1.0 - alpha));
}

double x_from_p_odd_alpha(double p_odd, double alpha) {
    return 2.0 * (1.0 - alpha) * p_odd * p_odd + 2.0 * (alpha - 1.0) * p_odd + 1.0;
}

double alpha_overlap(int n, double lambda1, double lambda2, double t) {
    if (n < 1) {
        throw std::invalid_argument("alpha_overlap: n must be >= 1");
    }
    double omega = std::hypot(lambda1, n * lambda2);
    if (omega == 0.0) {
        return 0.0;
    }
    // 2 n l1 l2 / Omega^2 <= 1 by AM-GM, so alpha stays in [0, 1].
    double ratio = 2.0 * n * lambda1 * lambda2 / (omega * omega);
    double s = std::sin(omega * t);
    return ratio * ratio * s * s * s * s;
}

BoundInputs BoundInputs::dephasing(int n, long t, double lambda, double p_z1, double nu) {
    BoundInputs b;
    b.n = n;
    b.t = t;
    b.lambda = lambda;
    b.nu = nu;
    b.p_odd = qmetro::p_odd(n, accumulate_rate(p_z1, t));
    b.p_dd = 1.0;
    b.one_minus_p_dd = 0.0;
    double c = std::cos(2.0 * n * static_cast<double>(t) * lambda);
    b.eta = c * c;
    b.validate();
    return b;
}

BoundInputs BoundInputs::iidp(int n, long t, double lambda, double p1, double nu) {
    BoundInputs b = dephasing(n, t, lambda, p1, nu);
    double rx = residual_x_rate(n, p1);
    double log_keep = static_cast<double>(t) * std::log1p(-rx);
    b.p_dd = std::exp(log_keep);
    b.one_minus_p_dd = -std::expm1(log_keep);
    b.validate();
    return b;
}

void BoundInputs::validate() const {
    if (n < 1 || t < 1) {
        throw std::invalid_argument("BoundInputs: need n >= 1 and t >= 1");
    }
    if (!(nu > 0.0)) {
        throw std::invalid_argument("BoundInputs: nu must be positive");
    }
    if (!(p_odd >= 0.0 && p_odd <= 0.5)) {
        throw std::invalid_argument("BoundInputs: p_odd outside [0, 1/2]");
    }
    if (!(p_dd > 0.0 && p_dd <= 1.0)) {
        throw std::invalid_argument("BoundInputs: p'' outside (0, 1]");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("BoundInputs: eta outside [0, 1]");
    }
}

double variance_bound_dephasing(const BoundInputs &b) {
    b.validate();
    if (!(b.eta > 0.0)) {
        throw std::domain_error("variance_bound_dephasing: eta = 0");
    }
    if (!(b.p_odd < 0.5)) {
        throw std::domain_error("variance_bound_dephasing: p_odd must be below 1/2");
    }
    double nt = b.n * static_cast<double>(b.t);
    double c = 1.0 - 2.0 * b.p_odd;
    double c2 = c * c;
    double base = b.nu * nt * nt * b.eta;
    return 3.0 / (8.0 * base * c2) + 3.0 / (16.0 * base * c2 * c2);
}

double bias_bound_iidp(const BoundInputs &b) {
    b.validate();
    if (!(b.eta > 0.0)) {
        throw std::domain_error("bias_bound_iidp: eta = 0");
    }
    double nt = b.n * static_cast<double>(b.t);
    double c = 1.0 - 2.0 * b.p_odd;
    double s = std::sin(2.0 * nt * b.lambda);
    return b.one_minus_p_dd / (nt * c * std::sqrt(b.eta)) * (1.0 + (1.0 + b.p_dd) * s / c);
}

std::optional<double> variance_bound_iidp(const BoundInputs &b) {
    b.validate();
    const double nt = b.n * static_cast<double>(b.t);
    const double p = b.p_odd;
    const double pp = b.p_dd;
    const double q = b.one_minus_p_dd;
    const double c = 1.0 - 2.0 * p;
    const double x_z = 1.0 - 2.0 * p + 2.0 * p * p;
    const double a_z = c * std::sin(2.0 * nt * b.lambda);

    if (pp * a_z - q < 0.0) {
        return std::nullopt;
    }
    // Lower bound on 2 tr(rho^2) - 1 and upper bound on <A>.
    const double d = pp * pp * c * c - q * (1.0 + pp);
    const double a = pp * a_z + q;
    const double gap = d - a * a;
    if (!(d > 0.0) || !(gap > 0.0)) {
        return std::nullopt;
    }
    // nu * Cov(A_hat, X_hat) upper bound.
    const double cov = pp * pp * a_z * (1.0 - pp * x_z) + q * (1.0 + pp + pp * pp * x_z);
    const double bracket = 0.25 + a * a / (2.0 * d * d) + a * cov / d;
    return bracket / (2.0 * b.nu * nt * nt * gap);
}

double exact_bias_swap(const BranchedState &state, int n, long t) {
    check_nt(n, t);
    const Mat2 a = restrict_observable(ObservableName::GHZyProjector, n).matrix;
    const Mat2 &clean = state.clean;
    const Mat2 &flipped = state.flipped;
    const double p_clean = state.clean_weight();
    const double p_flip = state.flipped_weight();
    if (!(p_clean > 0.0)) {
        throw std::domain_error("exact_bias_swap: flip-free branch has zero weight");
    }

    const Mat2 rho_z = clean / p_clean;
    const double a_z = (a * rho_z).trace().real();
    const double x_z = (rho_z * rho_z).trace().real();
    const double s0_sq = 2.0 * x_z - 1.0;
    if (!(s0_sq > kDegenerate)) {
        throw std::domain_error("exact_bias_swap: flip-free branch carries no purity signal");
    }
    const double s0 = std::sqrt(s0_sq);

    // Shifts of <A> and tr(rho^2) caused by the flipped branch, kept as differences.
    const double d_a = (a * flipped).trace().real() - p_flip * a_z;
    const double d_x = -p_flip * (1.0 + p_clean) * x_z + 2.0 * (clean * flipped).trace().real() +
                       (flipped * flipped).trace().real();
    const double s_sq = s0_sq + 2.0 * d_x;
    if (!(s_sq > kDegenerate)) {
        throw std::domain_error("exact_bias_swap: noisy state carries no purity signal");
    }
    const double s = std::sqrt(s_sq);
    const double d_s = 2.0 * d_x / (s + s0);

    const double u0 = a_z / s0;
    const double d_u = (d_a * s0 - a_z * d_s) / (s * s0);
    const double u = u0 + d_u;
    if (std::abs(u) >= 1.0 || std::abs(u0) >= 1.0) {
        return std::abs(std::asin(std::clamp(u, -1.0, 1.0)) - std::asin(std::clamp(u0, -1.0, 1.0))) /
               (2.0 * n * static_cast<double>(t));
    }
    // asin(u) - asin(u0) = asin((u - u0)(u + u0) / (u sqrt(1 - u0^2) + u0 sqrt(1 - u^2))).
    const double denom = u * std::sqrt(1.0 - u0 * u0) + u0 * std::sqrt(1.0 - u * u);
    double diff;
    if (std::abs(denom) > 1e-300) {
        diff = std::asin(d_u * (u + u0) / denom);
    } else {
        diff = std::asin(u) - std::asin(u0);
    }
    return std::abs(diff) / (2.0 * n * static_cast<double>(t));
}

}  // namespace qmetro
