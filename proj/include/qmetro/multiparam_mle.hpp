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

#ifndef QMETRO_MULTIPARAM_MLE_HPP
#define QMETRO_MULTIPARAM_MLE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "qmetro/estimators.hpp"
#include "qmetro/noise_channels.hpp"
#include "qmetro/swap_protocol.hpp"

namespace qmetro {

enum class NoisePlacement {
    /// Accumulate the per-unit channel over t units, then one QEC round.
    EndOfEvolution,
    /// Unit evolution step followed by the QEC-filtered channel, t times.
    PerTimeUnit,
};

struct NoiseModel {
    PauliChannelSpec unit = {};
    NoisePlacement placement = NoisePlacement::EndOfEvolution;
    TieRule tie = TieRule::CountAsFailure;
};

/// Noisy probe state after evolving the GHZ probe under `spec`.
BranchedState noisy_probe(const HamiltonianSpec &spec, const NoiseModel &noise);

struct ModelExpectations {
    double y = 0.0;      // <Y^n>
    double x = 1.0;      // tr(rho^2), the swap-test control mean
    double xy = 0.0;     // tr(Y^n rho^2)
    double alpha = 0.0;  // |<psi|Z_1|psi>|^2 of the noiseless state
};

ModelExpectations model_expectations(double lambda1, double lambda2, int n, long t, const NoiseModel &noise);

/// Binomial summaries of the swap-test shots at one evolution time. Counts may be
/// fractional when they are expectations (infinite-shot data).
struct TimePointData {
    long t = 0;
    double nu = 0.0;
    double a_plus = 0.0;   // +1 readouts among the 2 nu copy outcomes
    double xa_plus = 0.0;  // +1 values of x * a among the 2 nu products
    double x_plus = 0.0;   // +1 control readouts among nu

    double x_hat() const { return 2.0 * x_plus / nu - 1.0; }
    void validate() const;
};

using OutcomeData = std::vector<TimePointData>;

TimePointData summarize_counts(long t, const OutcomeCounts &counts);
/// Expected counts for nu shots drawn from `dist`.
TimePointData expected_counts(long t, const SwapDistribution &dist, double nu);

/// What each estimation model assumes about the data:
/// Naive fits copy readouts to the noiseless model, VSP fits x*a readouts to the
/// purified model scaled by X_hat, SwapTest rescales by sqrt(2 X_hat - 1), and
/// SwapTestAlpha inverts X_hat with the parameter-dependent overlap alpha.
struct MleModel {
    Method method = Method::SwapTest;
    int n = 3;
};

/// Per time point, the success probability each model predicts for its binomial.
double model_probability(const MleModel &model, double lambda1, double lambda2, const TimePointData &d);

/// Sum of binomial negative log-likelihoods with model probabilities clipped to
/// [1e-12, 1 - 1e-12].
double negative_log_likelihood(const MleModel &model, double lambda1, double lambda2, const OutcomeData &data);
/// The same objective minus its data-only saturated floor; nonnegative, same minimizer.
double deviance_half(const MleModel &model, double lambda1, double lambda2, const OutcomeData &data);

struct MleConfig {
    double init_box = 0.10;
    double tol = 1e-10;
    long max_iter = 10000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct MleTrace {
    std::vector<double> objective;  // best objective after each iteration
};

/// Nelder-Mead fit started uniformly inside truth_hint +- init_box |truth_hint|.
EstimateReport mle_fit(const OutcomeData &data, std::array<double, 2> truth_hint, const MleConfig &cfg,
                       const MleModel &model, MleTrace *trace = nullptr);

}  // namespace qmetro

#endif
