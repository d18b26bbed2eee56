// Copyright 2026 The dcrb Authors
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

// Closed-form theory for the measurement/feedforward blocks under a symmetric
// assignment error, and the product formulas that combine it with idling and
// CNOT errors.
//
// Transfer matrices act on an 8-dimensional space: a 2-dimensional classical
// register for the measured qubit (|0>>, |1>>) tensored with the vectorized
// data qubit. Index = 4 * register + data_vec_index.

#ifndef DCRB_ORACLE_H
#define DCRB_ORACLE_H

#include <cmath>
#include <vector>

#include "dcrb/noise.h"
#include "dcrb/qmath.h"
#include "dcrb/rbproto.h"

namespace dcrb {

struct TheoryParams {
    double eps_r = 0;
    double eps_2q = 0;
    double t1 = kInfinity;
    double t2 = kInfinity;
    double tau = 0;

    void validate() const {
        if (!(eps_r >= 0 && eps_r <= 1 && eps_2q >= 0 && eps_2q <= 1)) {
            throw ParameterError("eps_r and eps_2q must lie in [0, 1]");
        }
        if (!(tau >= 0)) {
            throw ParameterError("tau must be non-negative");
        }
        IdleNoise{t1, t2}.validate();
    }
};

/// Average error of T1/T2 idling for tau:
/// (2/3)(3/4 - exp(-tau/T1)/4 - exp(-tau/T2)/2).
inline double idle_error(double t1, double t2, double tau) {
    TheoryParams{0, 0, t1, t2, tau}.validate();
    return (2.0 / 3.0) * (0.75 - std::exp(-tau / t1) / 4 - std::exp(-tau / t2) / 2);
}

namespace detail {

inline void check_eps(double eps_r) {
    if (!(eps_r >= 0 && eps_r <= 1)) {
        throw ParameterError("eps_r must lie in [0, 1]");
    }
}

inline Matrix register_op(int out, int in) {
    Matrix m = Matrix::Zero(2, 2);
    m(out, in) = 1;
    return m;
}

inline Matrix pauli_twirl_error() {
    return depolarizing_superop(-1.0 / 3.0, 1).matrix();
}

/// (<<1| (x) I) M (v (x) I) for a classical input distribution v.
inline Matrix reduce_register(const Matrix &m, double in0, double in1) {
    Matrix out = Matrix::Zero(4, 4);
    for (int r = 0; r < 2; ++r) {
        out += in0 * m.block(4 * r, 0, 4, 4) + in1 * m.block(4 * r, 4, 4, 4);
    }
    return out;
}

}  // namespace detail

/// T = (1-e)(|0>><<0| (x) I + |0>><<1| (x) D_{-1/3}) + e(|1>><<0| (x) D_{-1/3} + |1>><<1| (x) I)
/// for the Z_c0/Z_c1 blocks.
inline Matrix transfer_matrix_zc(double eps_r) {
    detail::check_eps(eps_r);
    Matrix id = Matrix::Identity(4, 4);
    Matrix d = detail::pauli_twirl_error();
    using detail::register_op;
    return (1 - eps_r) * (kron(register_op(0, 0), id) + kron(register_op(0, 1), d)) +
           eps_r * (kron(register_op(1, 0), d) + kron(register_op(1, 1), id));
}

/// P(0) = (<<1| (x) <<0|) T^d (|0>> (x) |0>>).
inline double survival_zc(double eps_r, int depth) {
    if (depth < 0) {
        throw ParameterError("depth must be non-negative");
    }
    Matrix t = transfer_matrix_zc(eps_r);
    Vector v = Vector::Zero(8);
    v[0] = 1;
    for (int i = 0; i < depth; ++i) {
        v = t * v;
    }
    return (v[0] + v[4]).real();
}

inline std::vector<double> survival_zc_table(double eps_r, int max_depth) {
    std::vector<double> out;
    for (int d = 0; d <= max_depth; ++d) {
        out.push_back(survival_zc(eps_r, d));
    }
    return out;
}

struct NonMarkovianCheck {
    Matrix lhs;
    Matrix rhs;
    double deviation = 0;
};

/// Compares the two-block data-qubit map (<<1| (x) I) T^2 (|0>> (x) I) with the
/// square of the one-block map. They differ by e(1-2e)(D^2 - D), which
/// vanishes at e = 0 and e = 1/2.
inline NonMarkovianCheck check_nonmarkovian(double eps_r) {
    Matrix t = transfer_matrix_zc(eps_r);
    NonMarkovianCheck out;
    out.lhs = detail::reduce_register(t * t, 1, 0);
    Matrix one = detail::reduce_register(t, 1, 0);
    out.rhs = one * one;
    out.deviation = (out.lhs - out.rhs).cwiseAbs().maxCoeff();
    return out;
}

struct HcnotTransfer {
    /// C = (1-e)|0>><<1| (x) I + e|1>><<1| (x) D_{-1/3}, with <<1| = (1, 1).
    Matrix transfer;
    /// Data-qubit channel after tracing out the register.
    Superoperator effective;
};

inline HcnotTransfer transfer_matrix_hcnot(double eps_r) {
    detail::check_eps(eps_r);
    Matrix trace_row = Matrix::Ones(1, 2);
    Matrix out0 = Matrix::Zero(2, 1);
    out0(0, 0) = 1;
    Matrix out1 = Matrix::Zero(2, 1);
    out1(1, 0) = 1;
    Matrix transfer = (1 - eps_r) * kron(out0 * trace_row, Matrix::Identity(4, 4)) +
                      eps_r * kron(out1 * trace_row, detail::pauli_twirl_error());
    // Any normalized register input gives the same reduction because C ignores it.
    Matrix eff = detail::reduce_register(transfer, 0.5, 0.5);
    return {std::move(transfer), Superoperator(2, std::move(eff))};
}

/// Exact H_CNOT survival under assignment error only: 1/2 + (1 - 4e/3)^d / 2.
inline double survival_hcnot(double eps_r, int depth) {
    detail::check_eps(eps_r);
    if (depth < 0) {
        throw ParameterError("depth must be non-negative");
    }
    return 0.5 + 0.5 * std::pow(1 - 4 * eps_r / 3, depth);
}

/// Decay constant of the Z_c blocks to first order, 1 - 8e/9.
inline double alpha_zc_leading(double eps_r) {
    return 1 - 8 * eps_r / 9;
}

/// Slowest nontrivial eigenvalue of the data-coherence part of T, i.e. the
/// larger eigenvalue of [[1-e, -(1-e)/3], [-e/3, e]].
inline double alpha_zc_exact(double eps_r) {
    detail::check_eps(eps_r);
    double a = 1 - eps_r;
    double d = eps_r;
    double tr = a + d;
    double det = a * d - (a / 3) * (d / 3);
    return tr / 2 + std::sqrt(tr * tr / 4 - det);
}

/// Error per block predicted from incoherent error sources:
///   Z_c0, Z_c1: 1 - (1 - 4e_R/9)(1 - e_tau)
///   H_CNOT:     1 - (1 - 2e_R/3)(1 - e_tau)(1 - 2e_2Q/3)
///   Delay, I_c0, I_c1: e_tau
inline double predicted_error(BlockKind kind, const TheoryParams &p) {
    p.validate();
    double eps_tau = idle_error(p.t1, p.t2, p.tau);
    switch (kind) {
        case BlockKind::z_c0:
        case BlockKind::z_c1:
            return 1 - (1 - 4 * p.eps_r / 9) * (1 - eps_tau);
        case BlockKind::h_cnot:
            return 1 - (1 - 2 * p.eps_r / 3) * (1 - eps_tau) * (1 - 2 * p.eps_2q / 3);
        case BlockKind::delay:
        case BlockKind::i_c0:
        case BlockKind::i_c1:
            return eps_tau;
    }
    throw ConfigError("unknown block kind");
}

/// (1 - alpha_F / alpha_ref) / 2.
inline double interleaved_epsilon(double alpha_f, double alpha_ref) {
    if (!(alpha_ref > 0 && alpha_ref <= 1)) {
        throw ParameterError("reference alpha must lie in (0, 1]");
    }
    return (1 - alpha_f / alpha_ref) / 2;
}

/// (1 - alpha) / 2.
inline double raw_epsilon(double alpha) {
    return (1 - alpha) / 2;
}

/// Decay of k noisy Cliffords, (1 - 2 e_G)^k with e_G = depol_1q / 2.
inline double reference_alpha(double depol_1q, int k) {
    if (!(depol_1q >= 0 && depol_1q <= 1) || k < 0) {
        throw ParameterError("reference alpha needs depol_1q in [0, 1] and k >= 0");
    }
    return std::pow(1 - depol_1q, k);
}

}  // namespace dcrb

#endif
