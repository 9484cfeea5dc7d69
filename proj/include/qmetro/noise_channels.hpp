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

#ifndef QMETRO_NOISE_CHANNELS_HPP
#define QMETRO_NOISE_CHANNELS_HPP

#include "qmetro/logical_core.hpp"

namespace qmetro {

/// Single-qubit Pauli channel p_I rho + p_x X rho X + p_y Y rho Y + p_z Z rho Z,
/// applied independently to every qubit once per time unit.
struct PauliChannelSpec {
    double p_i = 1.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;

    /// Throws std::invalid_argument when a probability leaves [0,1] or the sum is off by > 1e-12.
    static PauliChannelSpec make(double p_x, double p_y, double p_z);
    static PauliChannelSpec dephasing(double p_z);
    /// Bit flip with rate p_x followed by dephasing with rate p_z.
    static PauliChannelSpec flip_then_dephase(double p_x, double p_z);

    void validate() const;
};

/// Logical Pauli channel left after one QEC-filtered round:
/// q_i I, q_x X_L, q_z Z_L, q_xz Z_L X_L.
struct LogicalPauliChannel {
    double q_i = 1.0;
    double q_x = 0.0;
    double q_z = 0.0;
    double q_xz = 0.0;

    static LogicalPauliChannel identity() { return {}; }
    void validate() const;

    /// Probability that the round ends in a logical bit flip.
    double failure() const { return q_x + q_xz; }
    Mat2 apply(const Mat2 &rho) const;
};

/// How a syndrome with exactly n/2 detected flips (even n) is resolved.
enum class TieRule {
    /// Every pattern with >= ceil(n/2) detected flips counts as a decoder failure.
    CountAsFailure,
    /// Majority-vote syndrome decoder that resolves ties by leaving qubit 0 unflipped:
    /// a tie pattern succeeds iff qubit 0 carried no X/Y error.
    SyndromeDecoder,
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
   public:
    void add(double v);
    double value() const { return sum_ + comp_; }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double binomial_coefficient(int n, int k);

/// 1 - (1 - p1)^t.
double accumulate_rate(double p1, long t);

/// Probability of an odd number of Z flips among n qubits: (1 - (1 - 2 p_z)^n) / 2.
double p_odd(int n, double p_z);

/// (1-p) rho + p Z_L rho Z_L.
LogicalState dephase_logical(const LogicalState &state, double p);

/// P(at least ceil(n/2) of n qubits flip).
double residual_x_rate(int n, double p_x);

LogicalPauliChannel qec_effective_channel(int n, const PauliChannelSpec &spec,
                                          TieRule rule = TieRule::CountAsFailure);

/// t-fold self-composition via Pauli transfer eigenvalues.
LogicalPauliChannel compose_channel(const LogicalPauliChannel &ch, long t);

/// Single-qubit channel after t unit steps, with each Pauli component accumulated
/// independently by accumulate_rate and the three components then combined.
PauliChannelSpec accumulate_components(const PauliChannelSpec &spec, long t);

/// Composition of two logical Pauli channels (apply `first`, then `second`).
LogicalPauliChannel then(const LogicalPauliChannel &first, const LogicalPauliChannel &second);

/// Unnormalized density split by decoder history: `clean` collects trajectories in
/// which no round failed, `flipped` those with at least one logical bit flip.
struct BranchedState {
    Mat2 clean = Mat2::Zero();
    Mat2 flipped = Mat2::Zero();

    Mat2 total() const { return clean + flipped; }
    double clean_weight() const { return clean.trace().real(); }
    double flipped_weight() const { return flipped.trace().real(); }
    LogicalState state() const { return LogicalState(hermitize(total())); }
};

/// Evolves for spec.t unit steps, applying `channel` after each step.
BranchedState evolve_interleaved(const LogicalState &initial, const HamiltonianSpec &spec,
                                 const LogicalPauliChannel &channel);

/// Evolves for spec.t unit steps, then applies `channel` once.
BranchedState evolve_then_apply(const LogicalState &initial, const HamiltonianSpec &spec,
                                const LogicalPauliChannel &channel);

}  // namespace qmetro

#endif
