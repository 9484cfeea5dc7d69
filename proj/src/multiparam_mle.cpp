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

#include "qmetro/multiparam_mle.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>

namespace qmetro {

namespace {

constexpr double kClip = 1e-12;

double clip(double q) { return std::clamp(q, kClip, 1.0 - kClip); }

double ideal_y(int n, double lambda1, double lambda2, long t) {
    HamiltonianSpec spec = HamiltonianSpec::two_param(n, lambda1, lambda2, t);
    return expectation(evolve(ghz_probe(), spec), restrict_observable(ObservableName::YtoN, n));
}

struct Binomial {
    double successes;
    double trials;
};

Binomial data_for(const MleModel &model, const TimePointData &d) {
    if (model.method == Method::VSP) {
        return {d.xa_plus, 2.0 * d.nu};
    }
    return {d.a_plus, 2.0 * d.nu};
}

// k log(k / (N q)) + (N - k) log((N - k) / (N (1 - q))), written so that the leading
// terms cancel analytically rather than numerically near the optimum.
double binomial_divergence(double k, double trials, double q) {
    double f = k / trials;
    double d = f - q;
    double acc = 0.0;
    if (f > 0.0) {
        acc += f * std::log1p(d / q);
    }
    if (f < 1.0) {
        acc += (1.0 - f) * std::log1p(-d / (1.0 - q));
    }
    return trials * acc;
}

}  // namespace

BranchedState noisy_probe(const HamiltonianSpec &spec, const NoiseModel &noise) {
    spec.validate();
    if (noise.placement == NoisePlacement::EndOfEvolution) {
        PauliChannelSpec accumulated = accumulate_components(noise.unit, spec.t);
        return evolve_then_apply(ghz_probe(), spec, qec_effective_channel(spec.n, accumulated, noise.tie));
    }
    return evolve_interleaved(ghz_probe(), spec, qec_effective_channel(spec.n, noise.unit, noise.tie));
}

ModelExpectations model_expectations(double lambda1, double lambda2, int n, long t, const NoiseModel &noise) {
    HamiltonianSpec spec = HamiltonianSpec::two_param(n, lambda1, lambda2, t);
    LogicalState rho = noisy_probe(spec, noise).state();
    MomentEstimates m = exact_moments(rho, restrict_observable(ObservableName::YtoN, n));
    return {m.A_hat, m.X_hat, m.XA_hat, alpha_overlap(n, lambda1, lambda2, static_cast<double>(t))};
}

void TimePointData::validate() const {
    if (t < 1) {
        throw std::invalid_argument("TimePointData: t must be >= 1");
    }
    if (!(nu > 0.0)) {
        throw std::invalid_argument("TimePointData: nu must be positive");
    }
    auto in_range = [](double k, double limit) { return k >= 0.0 && k <= limit * (1.0 + 1e-12); };
    if (!in_range(a_plus, 2.0 * nu) || !in_range(xa_plus, 2.0 * nu) || !in_range(x_plus, nu)) {
        throw std::invalid_argument("TimePointData: counts exceed the number of trials");
    }
}

TimePointData summarize_counts(long t, const OutcomeCounts &counts) {
    TimePointData d;
    d.t = t;
    for (int k = 0; k < 8; k++) {
        Shot s = outcome_shot(k);
        double c = static_cast<double>(counts[k]);
        d.nu += c;
        d.a_plus += c * ((s.a2 > 0) + (s.a3 > 0));
        d.xa_plus += c * ((s.x * s.a2 > 0) + (s.x * s.a3 > 0));
        d.x_plus += c * (s.x > 0);
    }
    d.validate();
    return d;
}

TimePointData expected_counts(long t, const SwapDistribution &dist, double nu) {
    TimePointData d;
    d.t = t;
    d.nu = nu;
    d.a_plus = nu * dist.mean([](int, int a2, int a3) { return double((a2 > 0) + (a3 > 0)); });
    d.xa_plus = nu * dist.mean([](int x, int a2, int a3) { return double((x * a2 > 0) + (x * a3 > 0)); });
    d.x_plus = nu * dist.mean([](int x, int, int) { return double(x > 0); });
    d.validate();
    return d;
}

double model_probability(const MleModel &model, double lambda1, double lambda2, const TimePointData &d) {
    const double y = ideal_y(model.n, lambda1, lambda2, d.t);
    const double x_hat = d.x_hat();
    double scale = 1.0;
    switch (model.method) {
        case Method::Naive:
            break;
        case Method::VSP:
            scale = x_hat;
            break;
        case Method::SwapTest:
            scale = std::sqrt(std::max(0.0, 2.0 * x_hat - 1.0));
            break;
        case Method::SwapTestAlpha: {
            double alpha = std::min(alpha_overlap(model.n, lambda1, lambda2, static_cast<double>(d.t)), 1.0 - kClip);
            // 1 - 2 p_odd with p_odd inverted from X_hat at this alpha; radicand floored at 0.
            scale = std::sqrt(std::max(0.0, (2.0 * x_hat - 1.0 - alpha) / (1.0 - alpha)));
            break;
        }
    }
    return clip(0.5 * (1.0 + scale * y));
}

double negative_log_likelihood(const MleModel &model, double lambda1, double lambda2, const OutcomeData &data) {
    double total = 0.0;
    for (const TimePointData &d : data) {
        Binomial b = data_for(model, d);
        double q = model_probability(model, lambda1, lambda2, d);
        total -= b.successes * std::log(q) + (b.trials - b.successes) * std::log(1.0 - q);
    }
    return total;
}

double deviance_half(const MleModel &model, double lambda1, double lambda2, const OutcomeData &data) {
    double total = 0.0;
    for (const TimePointData &d : data) {
        Binomial b = data_for(model, d);
        total += binomial_divergence(b.successes, b.trials, model_probability(model, lambda1, lambda2, d));
    }
    return total;
}

void MleConfig::validate() const {
    if (!(init_box > 0.0 && init_box < 1.0)) {
        throw std::invalid_argument("MleConfig: init_box must lie in (0, 1)");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("MleConfig: tol must be positive");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("MleConfig: max_iter must be >= 1");
    }
}

namespace {

struct FitContext {
    const OutcomeData *data;
    const MleModel *model;
    std::array<double, 2> scale;
};

double fit_objective(const gsl_vector *v, void *params) {
    const auto *ctx = static_cast<const FitContext *>(params);
    double value = deviance_half(*ctx->model, gsl_vector_get(v, 0) * ctx->scale[0],
                                 gsl_vector_get(v, 1) * ctx->scale[1], *ctx->data);
    return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer *s) const { gsl_multimin_fminimizer_free(s); }
};
struct VectorDeleter {
    void operator()(gsl_vector *v) const { gsl_vector_free(v); }
};

}  // namespace

EstimateReport mle_fit(const OutcomeData &data, std::array<double, 2> truth_hint, const MleConfig &cfg,
                       const MleModel &model, MleTrace *trace) {
    cfg.validate();
    if (data.empty()) {
        throw std::invalid_argument("mle_fit: no data");
    }
    for (const TimePointData &d : data) {
        d.validate();
    }
    gsl_set_error_handler_off();

    FitContext ctx{&data, &model, {}};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(2));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(2));
    for (int k = 0; k < 2; k++) {
        // Work in units of the hint so both coordinates are O(1).
        ctx.scale[k] = truth_hint[k] != 0.0 ? std::abs(truth_hint[k]) : 1.0;
        double init = truth_hint[k] + unit(rng) * cfg.init_box * std::abs(truth_hint[k]);
        gsl_vector_set(start.get(), k, init / ctx.scale[k]);
        gsl_vector_set(step.get(), k, 0.5 * cfg.init_box);
    }

    gsl_multimin_function fn{&fit_objective, 2, &ctx};
    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
    gsl_multimin_fminimizer_set(s.get(), &fn, start.get(), step.get());

    EstimateReport report;
    report.method = model.method;
    report.nu = data.front().nu;
    report.converged = false;
    // Near an exact fit the objective sits at the rounding floor and the simplex can stop
    // shrinking; a best value frozen for kStallWindow iterations also counts as converged.
    constexpr long kStallWindow = 500;
    long iter = 0;
    long stalled = 0;
    double last_best = std::numeric_limits<double>::infinity();
    while (iter < cfg.max_iter) {
        iter++;
        int status = gsl_multimin_fminimizer_iterate(s.get());
        if (trace) {
            trace->objective.push_back(s->fval);
        }
        if (status != GSL_SUCCESS) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), cfg.tol) == GSL_SUCCESS) {
            report.converged = true;
            break;
        }
        stalled = std::abs(s->fval - last_best) <= 1e-14 * std::max(1.0, std::abs(s->fval)) ? stalled + 1 : 0;
        last_best = s->fval;
        if (stalled >= kStallWindow) {
            report.converged = true;
            break;
        }
    }
    report.iterations = iter;
    const gsl_vector *best = gsl_multimin_fminimizer_x(s.get());
    double l1 = gsl_vector_get(best, 0) * ctx.scale[0];
    double l2 = gsl_vector_get(best, 1) * ctx.scale[1];
    if (!std::isfinite(l1) || !std::isfinite(l2)) {
        report.failed = true;
        return report;
    }
    report.estimate = {l1, l2};
    return report;
}

}  // namespace qmetro
