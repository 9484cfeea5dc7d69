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

#ifndef QMETRO_ESTIMATORS_HPP
#define QMETRO_ESTIMATORS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmetro/noise_channels.hpp"
#include "qmetro/swap_protocol.hpp"

namespace qmetro {

enum class Method { Naive, VSP, SwapTest, SwapTestAlpha };

std::string_view method_name(Method m);
/// Accepts "naive", "vsp", "swap", "swap_alpha".
std::optional<Method> parse_method(std::string_view name);

struct EstimateReport {
    Method method = Method::SwapTest;
    /// One entry per parameter; empty when failed.
    std::vector<double> estimate;
    /// Shot count; +inf for exact moments.
    double nu = 0.0;
    bool clamped = false;
    bool failed = false;
    std::optional<double> variance_bound;
    std::optional<double> bias_bound;
    /// Optimizer bookkeeping, untouched by the closed-form estimators.
    bool converged = true;
    long iterations = 0;

    double value(std::size_t k = 0) const { return estimate.at(k); }
};

/// Single-parameter estimators. `reference` is an optional prior value of lambda used
/// to choose the arcsin branch when 2 n t lambda may exceed pi/2; without it the
/// principal branch is returned.
EstimateReport lambda_swap(const MomentEstimates &m, int n, long t, std::optional<double> reference = {});
EstimateReport lambda_naive(const MomentEstimates &m, int n, long t, std::optional<double> reference = {});
EstimateReport lambda_vsp(const MomentEstimates &m, int n, long t, std::optional<double> reference = {});

/// (1 - sqrt(2X - 1)) / 2. Throws std::domain_error when 2X - 1 <= 0.
double p_odd_from_x(double x_hat);
/// Inverse of x_from_p_odd_alpha. Throws std::domain_error for alpha outside [0,1)
/// or a negative radicand.
double p_odd_from_x_alpha(double x_hat, double alpha);
/// tr(rho^2) for a two-branch mixture whose branches overlap with weight alpha.
double x_from_p_odd_alpha(double p_odd, double alpha);

/// |<psi|Z_1|psi>|^2 = 4 n^2 l1^2 l2^2 sin^4(Omega t) / Omega^4.
double alpha_overlap(int n, double lambda1, double lambda2, double t);

struct BoundInputs {
    int n = 1;
    long t = 1;
    double lambda = 0.0;
    /// Shot count; +inf is allowed.
    double nu = 1.0;
    double p_odd = 0.0;
    /// Probability of no decoder failure over t rounds, and its complement kept separately
    /// so that tiny failure rates survive.
    double p_dd = 1.0;
    double one_minus_p_dd = 0.0;
    /// cos^2(2 n t lambda).
    double eta = 1.0;

    /// Pure dephasing with per-unit rate p_z1.
    static BoundInputs dephasing(int n, long t, double lambda, double p_z1, double nu);
    /// Bit flip and dephasing both at per-unit rate p1, QEC after every unit.
    static BoundInputs iidp(int n, long t, double lambda, double p1, double nu);

    void validate() const;
};

/// 3/(8 nu n^2 t^2 (1-2p)^2 eta) + 3/(16 nu n^2 t^2 (1-2p)^4 eta). Throws std::domain_error
/// when eta = 0 or p_odd >= 1/2.
double variance_bound_dephasing(const BoundInputs &b);

/// Upper bound on the bias of the swap estimator from residual logical bit flips.
/// Throws std::domain_error when eta = 0.
double bias_bound_iidp(const BoundInputs &b);

/// First-order variance bound under bit flip plus dephasing. Absent when the lower bound
/// on 2 tr(rho^2) - 1 - <A>^2 is not positive, or when <A> >= 0 cannot be guaranteed.
std::optional<double> variance_bound_iidp(const BoundInputs &b);

/// |E[lambda_hat] - lambda| of the swap estimator on exact moments of `state`, measured
/// against the estimate carried by the flip-free branch alone. Resolves biases far below
/// the double-precision resolution of lambda itself.
double exact_bias_swap(const BranchedState &state, int n, long t);

}  // namespace qmetro

#endif
