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

// Brute-force dense reference simulator. Everything here works on full 2^n
// matrices built from Kronecker products and exists to cross-check the
// codespace shortcuts in logical_core / noise_channels / swap_protocol.

#ifndef QMETRO_ORACLE_SIM_HPP
#define QMETRO_ORACLE_SIM_HPP

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "qmetro/logical_core.hpp"
#include "qmetro/noise_channels.hpp"

namespace qmetro::oracle {

using DenseMatrix = Eigen::MatrixXcd;

constexpr int kMaxQubits = 4;

/// Full 2^n density. Site k is Kronecker factor k (bit n-1-k of the basis index).
class DenseState {
   public:
    /// Validates n in [1, 4], dimensions, trace, Hermiticity and PSD to 1e-10.
    DenseState(int n, DenseMatrix rho);

    int n() const { return n_; }
    const DenseMatrix &matrix() const { return rho_; }

    static DenseState ghz(int n);
    static DenseState basis(int n, unsigned index);
    /// Embeds a codespace density into the full space.
    static DenseState embed(int n, const LogicalState &logical);

   private:
    int n_;
    DenseMatrix rho_;
};

enum class Pauli { I, X, Y, Z };

DenseMatrix pauli_matrix(Pauli p);
/// Tensor product of single-site Paulis, ops[k] acting on site k.
DenseMatrix pauli_string(const std::vector<Pauli> &ops);
/// P on `site`, identity elsewhere.
DenseMatrix single_site(int n, int site, Pauli p);

/// Full 2^n Hamiltonian for the given spec.
DenseMatrix full_hamiltonian(const HamiltonianSpec &spec);
/// Full 2^n observable (2|GHZ_y><GHZ_y| - I or Y^n).
DenseMatrix full_observable(ObservableName name, int n);

DenseState full_evolve(const DenseState &rho, const HamiltonianSpec &spec);
DenseState apply_site_channel(const DenseState &rho, const PauliChannelSpec &spec, int site);
DenseState apply_all_sites(const DenseState &rho, const PauliChannelSpec &spec);

/// Syndrome measurement of Z_k Z_{k+1} followed by majority-vote X correction.
/// Ties (even n, n/2 flips) keep site 0 unflipped.
DenseState qec_round_full(const DenseState &rho);

/// Outcome probabilities of the swap-test circuit, indexed like SwapDistribution.
std::array<double, 8> swap_test_full(const DenseState &rho, ObservableName obs);

/// Codespace projection (renormalized) and the weight outside the codespace.
std::pair<LogicalState, double> reduce_to_logical(const DenseState &rho);

/// |<psi| Z_0 |psi>|^2 for the noiseless evolved GHZ probe.
double dense_alpha(const HamiltonianSpec &spec);

/// Exhaustive classification of all 4^n single-qubit Pauli patterns by
/// decoder outcome and residual phase parity. Serial reference.
LogicalPauliChannel enumerate_qec_channel_serial(int n, const PauliChannelSpec &spec, TieRule rule);
/// Same as above, OpenMP-parallel over patterns.
LogicalPauliChannel enumerate_qec_channel(int n, const PauliChannelSpec &spec, TieRule rule);

}  // namespace qmetro::oracle

#endif
