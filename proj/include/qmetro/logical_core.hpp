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

#ifndef QMETRO_LOGICAL_CORE_HPP
#define QMETRO_LOGICAL_CORE_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qmetro {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

/// Logical Pauli matrices in the codespace basis (|0...0>, |1...1>).
Mat2 logical_identity();
Mat2 logical_x();
Mat2 logical_y();
Mat2 logical_z();

/// A 2x2 density operator on span{|0...0>, |1...1>}.
///
/// The basis order is fixed: index 0 is |0...0>, index 1 is |1...1>. Construction
/// validates trace, Hermiticity and positivity to 1e-12 and throws
/// std::invalid_argument otherwise.
class LogicalState {
   public:
    explicit LogicalState(const Mat2 &matrix);

    /// Builds the density of a (not necessarily normalized) pure state; throws on zero norm.
    static LogicalState from_amplitudes(Complex amp0, Complex amp1);
    static LogicalState maximally_mixed();

    const Mat2 &matrix() const { return matrix_; }
    Complex operator()(int row, int col) const { return matrix_(row, col); }

    double purity() const;

   private:
    Mat2 matrix_;
};

enum class HamiltonianKind { SingleParamZ, TwoParamXZ };

/// H = lambda * sum_i Z_i (SingleParamZ) or lambda1 X...X + lambda2 sum_i Z_i (TwoParamXZ).
/// Time counts unit steps.
struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::SingleParamZ;
    int n = 1;
    std::vector<double> lambda{0.0};
    long t = 0;

    static HamiltonianSpec single(int n, double lambda, long t);
    static HamiltonianSpec two_param(int n, double lambda1, double lambda2, long t);

    /// Throws std::invalid_argument on n < 1, t < 0 or a wrong parameter count.
    void validate() const;
    HamiltonianSpec with_time(long new_t) const;
};

enum class ObservableName { GHZyProjector, YtoN };

struct LogicalObservable {
    Mat2 matrix;
    double spectral_norm_bound = 1.0;
};

LogicalState ghz_probe();

/// The generator restricted to the codespace.
Mat2 logical_hamiltonian(const HamiltonianSpec &spec);

/// exp(-i t H_L).
Mat2 logical_unitary(const HamiltonianSpec &spec);

LogicalState evolve(const LogicalState &state, const HamiltonianSpec &spec);

LogicalObservable restrict_observable(ObservableName name, int n);

/// tr(A rho). Throws std::logic_error if the trace has an imaginary part above 1e-12.
double expectation(const LogicalState &state, const LogicalObservable &obs);

/// Projects an arbitrary 2x2 matrix onto its Hermitian part.
Mat2 hermitize(const Mat2 &m);

}  // namespace qmetro

#endif
