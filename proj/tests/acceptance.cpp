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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qmetro/experiments.hpp"
#include "qmetro/validation.hpp"

using namespace qmetro;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

ExperimentConfig config(const std::string &text) {
    std::istringstream in(text);
    return parse_config(in, "acceptance");
}

bool within_rel(double value, double target, double rel) { return std::abs(value - target) <= rel * target; }

std::string fmt(const char *f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); i++) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); i++) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

Outcome residual_bit_flip() {
    double r = residual_x_rate(3, 0.0005);
    return {within_rel(r, 7.5e-7, 0.01), fmt("residual_x_rate(3, 5e-4) = %.5e (target 7.5e-7, 1%%)", r)};
}

Outcome misinterpretation() {
    struct Case {
        int n;
        double p, target, rel;
    };
    const Case cases[] = {{3, 1e-4, 1.20e-7, 0.01}, {3, 2.5e-3, 7.48e-5, 0.01},
                          {8, 1e-4, 1.12e-13, 0.02}, {8, 2.5e-3, 4.31e-8, 0.02}};
    bool ok = true;
    std::string detail;
    for (const Case &c : cases) {
        LogicalPauliChannel ch = qec_effective_channel(c.n, PauliChannelSpec::make(c.p, c.p, c.p));
        double v = ch.q_x + ch.q_xz;
        ok = ok && within_rel(v, c.target, c.rel);
        detail += fmt("n=%g p1=%g: %.4e; ", c.n, c.p, v);
    }
    return {ok, detail};
}

Outcome oracle_equivalence() {
    auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> results = run_validation_suite(1, kDefaultValidationCases);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string detail;
    for (const CheckResult &r : results) {
        detail += fmt("%.1e/", r.worst, r.tolerance) + fmt("%.0e ", r.tolerance);
    }
    return {all_passed(results) && secs < 60.0, detail + fmt("(%.1f s)", secs)};
}

Outcome infinite_shot_unbiasedness() {
    ExperimentConfig c = config("experiment = single\nn = 3\nlambda = 0.001\np1 = 0.0005\nnoise = dephasing\n"
                                "nu = inf\nrepetitions = 1\nt_start = 1\nt_step = 10\n");
    double swap_worst = 0, lo[2] = {1, 1}, hi[2] = {0, 0};
    bool ok = true;
    for (const ResultRow &r : run_experiment(c)) {
        if (r.row_type != "rep") {
            continue;
        }
        if (!r.abs_error) {
            ok = false;
            continue;
        }
        double e = *r.abs_error;
        if (r.method == "swap") {
            swap_worst = std::max(swap_worst, e);
        } else {
            int k = r.method == "vsp";
            lo[k] = std::min(lo[k], e);
            hi[k] = std::max(hi[k], e);
        }
    }
    ok = ok && swap_worst < 1e-9;
    for (int k = 0; k < 2; k++) {
        ok = ok && lo[k] >= 1e-7 && hi[k] <= 1e-2;
    }
    return {ok, fmt("swap max %.2e (< 1e-9); naive [%.2e, %.2e]; ", swap_worst, lo[0], hi[0]) +
                    fmt("vsp [%.2e, %.2e] (both within [1e-7, 1e-2])", lo[1], hi[1])};
}

Outcome finite_shot_ordering() {
    bool ok = true;
    std::string detail;
    for (const char *noise : {"dephasing", "iidp"}) {
        ExperimentConfig c = config(std::string("experiment = single\nn = 3\nlambda = 0.001\np1 = 0.0005\n") +
                                    "noise = " + noise + "\nnu = 1e6\nrepetitions = 10\nseed = 2026\n");
        std::map<long, std::map<std::string, double>> mean;
        for (const ResultRow &r : run_experiment(c)) {
            if (r.row_type == "summary" && r.mean_abs_error) {
                mean[r.t][r.method] = *r.mean_abs_error;
            }
        }
        int good = 0;
        for (auto &[t, m] : mean) {
            good += 10.0 * m["swap"] <= m["vsp"];
        }
        double frac = static_cast<double>(good) / mean.size();
        ok = ok && frac >= 0.8;
        detail += std::string(noise) + fmt(": %.1f%% of %g points; ", 100.0 * frac, mean.size());
    }
    return {ok, detail + "(need >= 80% with swap 10x below VSP)"};
}

Outcome variance_scaling() {
    const double lambda = 0.0005, p = 0.0005;
    std::vector<double> ts, vt;
    for (long t = 1; t <= 10; t++) {
        ts.push_back(t);
        vt.push_back(variance_bound_dephasing(BoundInputs::dephasing(3, t, lambda, p, 1.0)));
    }
    std::vector<double> ns, vn;
    for (int n = 3; n <= 30; n++) {
        ns.push_back(n);
        vn.push_back(variance_bound_dephasing(BoundInputs::dephasing(n, 1, lambda, p, 1.0)));
    }
    const double st = loglog_slope(ts, vt), sn = loglog_slope(ns, vn);
    ExperimentConfig c = config("experiment = variance\nn = 3, 5, 10\nlambda = 0.0005\np1 = 0.0005\nnu = 1\n"
                                "t_step = 1\n");
    std::vector<double> minima;
    for (const ResultRow &r : run_experiment(c)) {
        if (r.row_type == "minimum") {
            minima.push_back(*r.variance_bound);
        }
    }
    double spread = minima.size() == 3 ? *std::max_element(minima.begin(), minima.end()) /
                                             *std::min_element(minima.begin(), minima.end())
                                       : INFINITY;
    bool ok = std::abs(st + 2.0) <= 0.1 && std::abs(sn + 2.0) <= 0.1 && spread < 2.0;
    return {ok, fmt("slope vs t %.3f, slope vs n %.3f, minima spread over n={3,5,10} %.3f", st, sn, spread)};
}

Outcome bound_coverage() {
    struct Cfg {
        int n;
        long t;
        double lambda, p;
    };
    std::mt19937_64 rng(20260101);
    std::vector<Cfg> cfgs;
    while (cfgs.size() < 20) {
        Cfg c;
        c.n = std::uniform_int_distribution<int>(2, 10)(rng);
        c.t = std::uniform_int_distribution<long>(1, 200)(rng);
        c.lambda = std::uniform_real_distribution<double>(1e-5, 1.2 / (2.0 * c.n * c.t))(rng);
        c.p = std::uniform_real_distribution<double>(0.0, 0.005)(rng);
        // Keep the purity signal well clear of p_odd = 1/2, where the estimator is undefined.
        if (p_odd(c.n, accumulate_rate(c.p, c.t)) <= 0.25) {
            cfgs.push_back(c);
        }
    }
    const long nu = 10000;
    const int runs = 100, replicates = 100;
    int covered = 0;
    for (int run = 0; run < runs; run++) {
        const Cfg &c = cfgs[run % cfgs.size()];
        NoiseModel noise{PauliChannelSpec::dephasing(c.p), NoisePlacement::EndOfEvolution, TieRule::CountAsFailure};
        LogicalState rho = noisy_probe(HamiltonianSpec::single(c.n, c.lambda, c.t), noise).state();
        SwapDistribution dist = joint_distribution(rho, restrict_observable(ObservableName::GHZyProjector, c.n));
        std::vector<double> est;
        bool failed = false;
        for (int k = 0; k < replicates; k++) {
            MomentEstimates m = estimate_moments(sample_counts(dist, nu, cell_seed(777, run, k)));
            EstimateReport r = lambda_swap(m, c.n, c.t, c.lambda);
            failed = failed || r.failed;
            if (!r.failed) {
                est.push_back(r.value());
            }
        }
        if (failed) {
            continue;
        }
        double mean = 0;
        for (double e : est) {
            mean += e;
        }
        mean /= est.size();
        double var = 0;
        for (double e : est) {
            var += (e - mean) * (e - mean);
        }
        var /= est.size() - 1;
        covered += var <= variance_bound_dephasing(BoundInputs::dephasing(c.n, c.t, c.lambda, c.p, nu));
    }

    long points = 0, violations = 0, missing = 0;
    const char *grids[] = {"n = 3\nlambda = 0.0001, 0.0005, 0.001\np1 = 0.0005\n",
                           "n = 3\nlambda = 0.0005\np1 = 0.0001, 0.0005, 0.001\n",
                           "n = 3, 5, 10\nlambda = 0.0005\np1 = 0.0005\n"};
    for (const char *g : grids) {
        for (const ResultRow &r : run_experiment(config(std::string("experiment = bias_iidp\n") + g))) {
            // The plotted domain is p_{z,t} < 1/2, where the bound is defined.
            if (r.row_type != "bound" || accumulate_rate(r.p1, r.t) >= 0.5) {
                continue;
            }
            points++;
            if (!r.bias || !r.bias_bound || std::isnan(*r.bias) || std::isnan(*r.bias_bound)) {
                missing++;
            } else if (*r.bias > *r.bias_bound) {
                violations++;
            }
        }
    }
    bool ok = covered >= 95 && violations == 0 && missing == 0;
    return {ok, fmt("variance covered in %g/100 runs (need 95); bias > bound at %g of %g grid points, %g "
                    "without a value",
                    covered, violations, points, missing)};
}

Outcome bias_growth_with_n() {
    ExperimentConfig c = config("experiment = bias_iidp\nn = 3, 5, 10\nlambda = 0.0005\np1 = 0.0005\nt_step = 10\n");
    std::map<int, std::map<long, double>> bias;
    for (const ResultRow &r : run_experiment(c)) {
        if (r.row_type == "bound" && r.bias) {
            bias[r.n][r.t] = *r.bias;
        }
    }
    std::vector<long> common;
    for (auto &[t, b] : bias[10]) {
        if (bias[3].count(t) && bias[5].count(t)) {
            common.push_back(t);
        }
    }
    bool monotone = !common.empty();
    for (long t : common) {
        monotone = monotone && bias[3][t] > bias[5][t] && bias[5][t] > bias[10][t];
    }
    long mid = common.empty() ? 0 : common[common.size() / 2];
    double ratio = common.empty() ? 0.0 : bias[3][mid] / bias[10][mid];
    return {monotone && ratio >= 1e6,
            std::string(monotone ? "monotone" : "NOT monotone") +
                fmt(" over n = 3, 5, 10 at %g matched t; midpoint t=%g ratio %.2e (need >= 1e6)",
                    common.size(), mid, ratio)};
}

std::map<double, std::map<std::string, double>> mle_summary(const ExperimentConfig &c) {
    std::map<double, std::map<std::string, double>> out;
    for (const ResultRow &r : run_experiment(c)) {
        if (r.row_type == "summary" && r.mean_abs_error) {
            out[r.p1][r.method] = *r.mean_abs_error;
        }
    }
    return out;
}

Outcome multi_parameter_ordering() {
    auto s = mle_summary(config("experiment = multi\nn = 3\nlambda1 = 0.001\nlambda2 = 0.002\n"
                                "p1 = linspace(0.0001, 0.0025, 10)\nnoise = iidp\nnu = 1e6\nrepetitions = 10\n"
                                "seed = 2026\n"));
    bool ok = true;
    int checked = 0;
    for (auto &[p, m] : s) {
        if (p >= 0.001 - 1e-12) {
            checked++;
            ok = ok && m["swap"] <= m["vsp"];
        }
    }
    auto &last = s.rbegin()->second;
    double ratio = last["vsp"] / last["naive"];
    ok = ok && checked > 0 && ratio >= 0.5 && ratio <= 2.0;
    return {ok, fmt("swap <= vsp required at %g points with p1 >= 0.001; vsp/naive at p1=%.4f: %.3f", checked,
                    s.rbegin()->first, ratio)};
}

Outcome alpha_correction() {
    auto s = mle_summary(config("experiment = multi_alpha\nn = 3\nlambda1 = 1\nlambda2 = 0.25\n"
                                "p1 = linspace(0.0001, 0.0025, 10)\nnoise = dephasing\nnu = inf\n"
                                "repetitions = 1\n"));
    double worst_alpha = 0, worst_ratio = INFINITY;
    for (auto &[p, m] : s) {
        worst_alpha = std::max(worst_alpha, m["swap_alpha"]);
        worst_ratio = std::min(worst_ratio, m["swap"] / m["swap_alpha"]);
    }
    return {worst_alpha < 1e-8 && worst_ratio >= 1e3,
            fmt("alpha-aware max error %.2e (< 1e-8); min swap/alpha-aware ratio %.2e (>= 1e3)", worst_alpha,
                worst_ratio)};
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"residual bit-flip rate", residual_bit_flip},
        {"QEC misinterpretation probabilities", misinterpretation},
        {"oracle equivalence", oracle_equivalence},
        {"infinite-shot unbiasedness", infinite_shot_unbiasedness},
        {"finite-shot ordering", finite_shot_ordering},
        {"variance-bound scaling", variance_scaling},
        {"bound coverage", bound_coverage},
        {"bias decrease with n", bias_growth_with_n},
        {"multi-parameter ordering", multi_parameter_ordering},
        {"alpha-aware correction", alpha_correction},
    };
    int failures = 0;
    for (const Criterion &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.passed;
        std::printf("%s  %-38s %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
