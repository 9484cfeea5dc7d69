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

#include "qmetro/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qmetro/estimators.hpp"
#include "qmetro/multiparam_mle.hpp"
#include "qmetro/oracle_sim.hpp"
#include "qmetro/swap_protocol.hpp"

namespace qmetro {

namespace {

using oracle::DenseState;

double max_diff(const Mat2 &a, const Mat2 &b) { return (a - b).cwiseAbs().maxCoeff(); }

double channel_diff(const LogicalPauliChannel &a, const LogicalPauliChannel &b) {
    return std::max({std::abs(a.q_i - b.q_i), std::abs(a.q_x - b.q_x), std::abs(a.q_z - b.q_z),
                     std::abs(a.q_xz - b.q_xz)});
}

double distribution_diff(const std::array<double, 8> &dense, const SwapDistribution &logical) {
    double worst = 0.0;
    for (int k = 0; k < 8; k++) {
        worst = std::max(worst, std::abs(dense[k] - logical.probs[k]));
    }
    return worst;
}

Mat2 codespace_block(const oracle::DenseMatrix &m) {
    const Eigen::Index last = m.rows() - 1;
    Mat2 out;
    out << m(0, 0), m(0, last), m(last, 0), m(last, last);
    return out;
}

class Sampler {
   public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    PauliChannelSpec channel(double max_rate) {
        return PauliChannelSpec::make(uniform(0.0, max_rate), uniform(0.0, max_rate), uniform(0.0, max_rate));
    }

    HamiltonianSpec hamiltonian(int n, long t) {
        if (integer(0, 1) == 0) {
            return HamiltonianSpec::single(n, uniform(-0.05, 0.05), t);
        }
        return HamiltonianSpec::two_param(n, uniform(-0.05, 0.05), uniform(-0.05, 0.05), t);
    }

   private:
    std::mt19937_64 rng_;
};

class Check {
   public:
    Check(std::string name, double tolerance) { result_ = {std::move(name), true, 0.0, tolerance, 0}; }

    void record(double diff) {
        result_.cases++;
        result_.worst = std::isnan(diff) ? INFINITY : std::max(result_.worst, diff);
    }
    CheckResult finish() {
        result_.passed = result_.worst <= result_.tolerance;
        return result_;
    }

   private:
    CheckResult result_;
};

CheckResult check_channel_enumeration(Sampler &s) {
    Check c("generating function vs 4^n enumeration", 1e-14);
    for (int n = 1; n <= 6; n++) {
        for (int k = 0; k < 5; k++) {
            PauliChannelSpec spec = s.channel(0.1);
            for (TieRule rule : {TieRule::CountAsFailure, TieRule::SyndromeDecoder}) {
                LogicalPauliChannel serial = oracle::enumerate_qec_channel_serial(n, spec, rule);
                c.record(channel_diff(qec_effective_channel(n, spec, rule), serial));
                c.record(channel_diff(oracle::enumerate_qec_channel(n, spec, rule), serial));
            }
        }
    }
    return c.finish();
}

CheckResult check_restriction(Sampler &) {
    Check c("restricted observables vs dense codespace block", 1e-12);
    for (int n = 1; n <= oracle::kMaxQubits; n++) {
        for (ObservableName name : {ObservableName::GHZyProjector, ObservableName::YtoN}) {
            c.record(max_diff(codespace_block(oracle::full_observable(name, n)), restrict_observable(name, n).matrix));
        }
    }
    return c.finish();
}

CheckResult check_evolution(Sampler &s) {
    Check c("dense evolution vs codespace evolution", 1e-12);
    for (int n = 1; n <= oracle::kMaxQubits; n++) {
        for (int k = 0; k < 10; k++) {
            HamiltonianSpec spec = s.hamiltonian(n, s.integer(0, 100));
            auto [logical, leakage] = oracle::reduce_to_logical(oracle::full_evolve(DenseState::ghz(n), spec));
            c.record(std::max(leakage, max_diff(logical.matrix(), evolve(ghz_probe(), spec).matrix())));
        }
    }
    return c.finish();
}

CheckResult check_alpha(Sampler &s) {
    Check c("overlap alpha vs dense |<psi|Z_0|psi>|^2", 1e-12);
    for (int n = 1; n <= oracle::kMaxQubits; n++) {
        for (int k = 0; k < 10; k++) {
            double l1 = s.uniform(-1.0, 1.0);
            double l2 = s.uniform(-1.0, 1.0);
            long t = s.integer(1, 5);
            c.record(std::abs(oracle::dense_alpha(HamiltonianSpec::two_param(n, l1, l2, t)) -
                              alpha_overlap(n, l1, l2, static_cast<double>(t))));
        }
    }
    return c.finish();
}

// One unit step, then per-site noise and a QEC round, repeated t times.
DenseState dense_interleaved(int n, const HamiltonianSpec &spec, const PauliChannelSpec &noise) {
    HamiltonianSpec unit = spec;
    unit.t = 1;
    DenseState rho = DenseState::ghz(n);
    for (long step = 0; step < spec.t; step++) {
        rho = oracle::qec_round_full(oracle::apply_all_sites(oracle::full_evolve(rho, unit), noise));
    }
    return rho;
}

void compare_pipeline(Check &c, int n, const DenseState &dense, const LogicalState &logical) {
    auto [reduced, leakage] = oracle::reduce_to_logical(dense);
    c.record(std::max(leakage, max_diff(reduced.matrix(), logical.matrix())));
    for (ObservableName name : {ObservableName::GHZyProjector, ObservableName::YtoN}) {
        c.record(distribution_diff(oracle::swap_test_full(dense, name),
                                   joint_distribution(logical, restrict_observable(name, n))));
    }
}

CheckResult check_interleaved(Sampler &s, int cases) {
    Check c("interleaved pipeline (evolution, IIDP, QEC, swap test) vs dense", 1e-10);
    for (int n = 2; n <= oracle::kMaxQubits; n++) {
        for (int k = 0; k < cases; k++) {
            HamiltonianSpec spec = s.hamiltonian(n, s.integer(1, 50));
            PauliChannelSpec noise = s.channel(0.02);
            // The dense decoder resolves even-n ties deterministically.
            NoiseModel model{noise, NoisePlacement::PerTimeUnit, TieRule::SyndromeDecoder};
            compare_pipeline(c, n, dense_interleaved(n, spec, noise), noisy_probe(spec, model).state());
        }
    }
    return c.finish();
}

CheckResult check_end_placement(Sampler &s) {
    Check c("end-of-evolution pipeline vs dense", 1e-10);
    for (int n = 2; n <= oracle::kMaxQubits; n++) {
        for (int k = 0; k < 20; k++) {
            HamiltonianSpec spec = s.hamiltonian(n, s.integer(1, 200));
            PauliChannelSpec noise = s.channel(0.005);
            NoiseModel model{noise, NoisePlacement::EndOfEvolution, TieRule::SyndromeDecoder};
            DenseState dense = oracle::full_evolve(DenseState::ghz(n), spec);
            dense = oracle::qec_round_full(oracle::apply_all_sites(dense, accumulate_components(noise, spec.t)));
            compare_pipeline(c, n, dense, noisy_probe(spec, model).state());
        }
    }
    return c.finish();
}

CheckResult check_marginals(Sampler &s) {
    Check c("swap-test marginals: sum, <a2>, <a3>, <x a2>", 1e-12);
    for (int n = 2; n <= oracle::kMaxQubits; n++) {
        for (int k = 0; k < 10; k++) {
            HamiltonianSpec spec = s.hamiltonian(n, s.integer(1, 50));
            DenseState rho = oracle::apply_all_sites(oracle::full_evolve(DenseState::ghz(n), spec),
                                                     PauliChannelSpec::dephasing(s.uniform(0.0, 0.2)));
            rho = oracle::qec_round_full(rho);
            LogicalState logical = oracle::reduce_to_logical(rho).first;
            const Mat2 a = restrict_observable(ObservableName::GHZyProjector, n).matrix;
            const double tr_a = (a * logical.matrix()).trace().real();
            const double tr_a2 = (a * logical.matrix() * logical.matrix()).trace().real();

            SwapDistribution dist;
            dist.probs = oracle::swap_test_full(rho, ObservableName::GHZyProjector);
            double total = 0.0;
            for (double p : dist.probs) {
                total += p;
            }
            c.record(std::abs(total - 1.0));
            c.record(std::abs(dist.mean([](int, int a2, int) { return double(a2); }) - tr_a));
            c.record(std::abs(dist.mean([](int, int, int a3) { return double(a3); }) - tr_a));
            c.record(std::abs(dist.mean([](int x, int a2, int) { return double(x * a2); }) - tr_a2));
        }
    }
    return c.finish();
}

}  // namespace

std::vector<CheckResult> run_validation_suite(std::uint64_t seed, int cases) {
    Sampler s(seed);
    std::vector<CheckResult> out;
    out.push_back(check_channel_enumeration(s));
    out.push_back(check_restriction(s));
    out.push_back(check_evolution(s));
    out.push_back(check_alpha(s));
    out.push_back(check_marginals(s));
    out.push_back(check_interleaved(s, cases));
    out.push_back(check_end_placement(s));
    return out;
}

bool all_passed(const std::vector<CheckResult> &results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult &r) { return r.passed; });
}

}  // namespace qmetro
