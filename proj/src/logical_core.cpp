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

#include "qmetro/logical_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmetro {

namespace {

constexpr double kStateTol = 1e-12;
constexpr Complex kI{0.0, 1.0};

}  // namespace

Mat2 logical_identity() { return Mat2::Identity(); }

Mat2 logical_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

Mat2 logical_y() {
    Mat2 m;
    m << 0, -kI, kI, 0;
    return m;
}

Mat2 logical_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

Mat2 hermitize(const Mat2 &m) { return 0.5 * (m + m.adjoint()); }

LogicalState::LogicalState(const Mat2 &matrix) : matrix_(matrix) {
    Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > kStateTol) {
        throw std::invalid_argument("LogicalState: trace " + std::to_string(tr.real()) + " is not 1");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kStateTol) {
        throw std::invalid_argument("LogicalState: matrix is not Hermitian");
    }
    // 2x2 Hermitian: the smaller eigenvalue is (tr - sqrt((a-d)^2 + 4|b|^2)) / 2.
    double a = matrix_(0, 0).real();
    double d = matrix_(1, 1).real();
    double off = std::abs(matrix_(0, 1));
    double min_eig = 0.5 * ((a + d) - std::sqrt((a - d) * (a - d) + 4.0 * off * off));
    if (min_eig < -kStateTol) {
        throw std::invalid_argument("LogicalState: matrix has a negative eigenvalue");
    }
}

LogicalState LogicalState::from_amplitudes(Complex amp0, Complex amp1) {
    double norm2 = std::norm(amp0) + std::norm(amp1);
    if (norm2 == 0.0) {
        throw std::invalid_argument("LogicalState: zero amplitude vector");
    }
    Eigen::Vector2cd v(amp0, amp1);
    v /= std::sqrt(norm2);
    return LogicalState(hermitize(v * v.adjoint()));
}

LogicalState LogicalState::maximally_mixed() { return LogicalState(0.5 * Mat2::Identity()); }

double LogicalState::purity() const { return (matrix_ * matrix_).trace().real(); }

HamiltonianSpec HamiltonianSpec::single(int n, double lambda, long t) {
    HamiltonianSpec spec{HamiltonianKind::SingleParamZ, n, {lambda}, t};
    spec.validate();
    return spec;
}

HamiltonianSpec HamiltonianSpec::two_param(int n, double lambda1, double lambda2, long t) {
    HamiltonianSpec spec{HamiltonianKind::TwoParamXZ, n, {lambda1, lambda2}, t};
    spec.validate();
    return spec;
}

void HamiltonianSpec::validate() const {
    if (n < 1) {
        throw std::invalid_argument("HamiltonianSpec: n must be >= 1");
    }
    if (t < 0) {
        throw std::invalid_argument("HamiltonianSpec: t must be >= 0");
    }
    size_t want = kind == HamiltonianKind::SingleParamZ ? 1 : 2;
    if (lambda.size() != want) {
        throw std::invalid_argument("HamiltonianSpec: expected " + std::to_string(want) + " parameter(s)");
    }
}

HamiltonianSpec HamiltonianSpec::with_time(long new_t) const {
    HamiltonianSpec copy = *this;
    copy.t = new_t;
    copy.validate();
    return copy;
}

LogicalState ghz_probe() { return LogicalState::from_amplitudes(1.0, 1.0); }

namespace {

// H_L = x_coef * X_L + z_coef * Z_L.
struct Generator {
    double x_coef;
    double z_coef;
};

Generator generator_of(const HamiltonianSpec &spec) {
    spec.validate();
    if (spec.kind == HamiltonianKind::SingleParamZ) {
        return {0.0, spec.n * spec.lambda[0]};
    }
    return {spec.lambda[0], spec.n * spec.lambda[1]};
}

}  // namespace

Mat2 logical_hamiltonian(const HamiltonianSpec &spec) {
    Generator g = generator_of(spec);
    return g.x_coef * logical_x() + g.z_coef * logical_z();
}

Mat2 logical_unitary(const HamiltonianSpec &spec) {
    Generator g = generator_of(spec);
    double omega = std::hypot(g.x_coef, g.z_coef);
    if (omega == 0.0 || spec.t == 0) {
        return Mat2::Identity();
    }
    double phase = omega * static_cast<double>(spec.t);
    Mat2 unit_generator = (g.x_coef * logical_x() + g.z_coef * logical_z()) / omega;
    return std::cos(phase) * Mat2::Identity() - kI * std::sin(phase) * unit_generator;
}

LogicalState evolve(const LogicalState &state, const HamiltonianSpec &spec) {
    if (spec.t == 0) {
        return state;
    }
    Mat2 u = logical_unitary(spec);
    return LogicalState(hermitize(u * state.matrix() * u.adjoint()));
}

LogicalObservable restrict_observable(ObservableName name, int n) {
    if (n < 1) {
        throw std::invalid_argument("restrict_observable: n must be >= 1");
    }
    Mat2 m = Mat2::Zero();
    switch (name) {
        case ObservableName::GHZyProjector: {
            // 2|g><g| - I with |g> = (|0...0> + i|1...1>)/sqrt(2).
            m(0, 1) = -kI;
            m(1, 0) = kI;
            break;
        }
        case ObservableName::YtoN: {
            // Y|0> = i|1>, so Y^n |0...0> = i^n |1...1>.
            Complex in{1.0, 0.0};
            for (int k = 0; k < n % 4; k++) {
                in *= kI;
            }
            m(1, 0) = in;
            m(0, 1) = std::conj(in);
            break;
        }
    }
    return {m, 1.0};
}

double expectation(const LogicalState &state, const LogicalObservable &obs) {
    Complex v = (obs.matrix * state.matrix()).trace();
    if (std::abs(v.imag()) > 1e-12) {
        throw std::logic_error("expectation: non-real trace");
    }
    return v.real();
}

}  // namespace qmetro
