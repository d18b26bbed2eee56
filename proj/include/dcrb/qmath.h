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

// Dense states and channels on at most three qubits.
//
// Conventions used everywhere in dcrb:
//  * Basis index i = sum_q b_q 2^q, i.e. qubit 0 is the least significant bit.
//    An operator acting on `targets` uses local bit t for qubit targets[t].
//  * Vectorization is column stacking: vec(rho)[i + j*dim] = rho(i, j).
//    With this convention vec(A rho B) = (B^T kron A) vec(rho), so the
//    superoperator of rho -> K rho K^dag is conj(K) kron K.

#ifndef DCRB_QMATH_H
#define DCRB_QMATH_H

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcrb/error.h"

namespace dcrb {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 3;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

/// Number of qubits for a power-of-two dimension; throws otherwise.
inline int qubits_for_dim(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    if ((Eigen::Index{1} << n) != dim || dim < 2) {
        throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two >= 2");
    }
    return n;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline bool is_unitary(const Matrix &u, double tol = kUnitaryTol) {
    if (u.rows() != u.cols()) {
        return false;
    }
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

namespace gates {

inline Matrix identity(int n_qubits = 1) {
    Eigen::Index d = Eigen::Index{1} << n_qubits;
    return Matrix::Identity(d, d);
}
inline Matrix x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Matrix y() {
    Matrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
inline Matrix z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
inline Matrix h() {
    Matrix m(2, 2);
    double s = 1 / std::numbers::sqrt2;
    m << s, s, s, -s;
    return m;
}
inline Matrix s() {
    Matrix m(2, 2);
    m << 1, 0, 0, cplx(0, 1);
    return m;
}
/// diag(1, e^{i phi}); same sign convention as the idle Hamiltonian phases.
inline Matrix rz(double phi) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1;
    m(1, 1) = std::polar(1.0, phi);
    return m;
}
/// Local bit 0 is the control, local bit 1 the target.
inline Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(2, 2) = 1;
    m(1, 3) = 1;
    return m;
}

}  // namespace gates

/// Lifts `op` acting on `targets` to the full `n_qubits` register.
inline Matrix embed_operator(const Matrix &op, std::span<const int> targets, int n_qubits) {
    int k = static_cast<int>(targets.size());
    if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
        throw DimensionError("operator dimension does not match target count");
    }
    unsigned target_mask = 0;
    for (int t : targets) {
        if (t < 0 || t >= n_qubits) {
            throw ParameterError("target qubit " + std::to_string(t) + " out of range");
        }
        if (target_mask & (1u << t)) {
            throw ParameterError("duplicate target qubit " + std::to_string(t));
        }
        target_mask |= 1u << t;
    }
    auto local = [&](unsigned full) {
        unsigned l = 0;
        for (int t = 0; t < k; ++t) {
            l |= ((full >> targets[t]) & 1u) << t;
        }
        return l;
    };
    unsigned dim = 1u << n_qubits;
    Matrix out = Matrix::Zero(dim, dim);
    for (unsigned r = 0; r < dim; ++r) {
        for (unsigned c = 0; c < dim; ++c) {
            if ((r & ~target_mask) == (c & ~target_mask)) {
                out(r, c) = op(local(r), local(c));
            }
        }
    }
    return out;
}

class DensityMatrix {
   public:
    /// Validates Hermiticity, unit trace and positivity.
    explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
        n_qubits_ = qubits_for_dim(rho_.rows());
        if (rho_.cols() != rho_.rows()) {
            throw DimensionError("density matrix must be square");
        }
        if (n_qubits_ > kMaxQubits) {
            throw DimensionError("density matrices are limited to " + std::to_string(kMaxQubits) + " qubits");
        }
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
            throw ParameterError("density matrix is not Hermitian");
        }
        if (std::abs(rho_.trace() - cplx(1.0)) > kTraceTol) {
            throw ParameterError("density matrix trace is not 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPsdTol) {
            throw ParameterError("density matrix is not positive semidefinite");
        }
    }

    static DensityMatrix ground(int n_qubits) {
        Eigen::Index d = Eigen::Index{1} << n_qubits;
        Matrix m = Matrix::Zero(d, d);
        m(0, 0) = 1;
        return DensityMatrix(std::move(m));
    }

    static DensityMatrix maximally_mixed(int n_qubits) {
        Eigen::Index d = Eigen::Index{1} << n_qubits;
        return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
    }

    static DensityMatrix from_pure(const Vector &psi) {
        Vector n = psi / psi.norm();
        return DensityMatrix(n * n.adjoint());
    }

    /// Basis projector |index><index|.
    static DensityMatrix basis(int n_qubits, Eigen::Index index) {
        Eigen::Index d = Eigen::Index{1} << n_qubits;
        Matrix m = Matrix::Zero(d, d);
        m(index, index) = 1;
        return DensityMatrix(std::move(m));
    }

    int n_qubits() const {
        return n_qubits_;
    }
    Eigen::Index dim() const {
        return rho_.rows();
    }
    const Matrix &matrix() const {
        return rho_;
    }
    cplx operator()(Eigen::Index i, Eigen::Index j) const {
        return rho_(i, j);
    }
    double purity() const {
        return (rho_ * rho_).trace().real();
    }
    /// Probability of finding `qubit` in |0>.
    double probability_zero(int qubit) const {
        double p = 0;
        for (Eigen::Index i = 0; i < dim(); ++i) {
            if (((i >> qubit) & 1) == 0) {
                p += rho_(i, i).real();
            }
        }
        return p;
    }

   private:
    Matrix rho_;
    int n_qubits_ = 0;
};

inline Vector vectorize(const Matrix &m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Vector vectorize(const DensityMatrix &rho) {
    return vectorize(rho.matrix());
}

inline Matrix unvectorize(const Vector &v) {
    auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size()) {
        throw DimensionError("vector length is not a perfect square");
    }
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

class KrausChannel {
   public:
    explicit KrausChannel(std::vector<Matrix> ops) : ops_(std::move(ops)) {
        if (ops_.empty()) {
            throw ParameterError("Kraus channel needs at least one operator");
        }
        Eigen::Index d = ops_.front().rows();
        n_qubits_ = qubits_for_dim(d);
        Matrix sum = Matrix::Zero(d, d);
        for (const auto &k : ops_) {
            if (k.rows() != d || k.cols() != d) {
                throw DimensionError("Kraus operators must share one square dimension");
            }
            sum += k.adjoint() * k;
        }
        if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kTraceTol) {
            throw ParameterError("Kraus operators do not sum to identity");
        }
    }

    static KrausChannel identity(int n_qubits) {
        return KrausChannel({gates::identity(n_qubits)});
    }
    static KrausChannel unitary(const Matrix &u) {
        if (!is_unitary(u)) {
            throw ParameterError("matrix is not unitary");
        }
        return KrausChannel({u});
    }

    const std::vector<Matrix> &operators() const {
        return ops_;
    }
    int n_qubits() const {
        return n_qubits_;
    }
    Eigen::Index dim() const {
        return ops_.front().rows();
    }

   private:
    std::vector<Matrix> ops_;
    int n_qubits_ = 0;
};

/// Linear map on column-stacked density matrices.
class Superoperator {
   public:
    Superoperator(Eigen::Index dim, Matrix elements) : dim_(dim), m_(std::move(elements)) {
        if (m_.rows() != dim * dim || m_.cols() != dim * dim) {
            throw DimensionError("superoperator must be dim^2 x dim^2");
        }
    }

    static Superoperator identity(Eigen::Index dim) {
        return Superoperator(dim, Matrix::Identity(dim * dim, dim * dim));
    }
    static Superoperator from_kraus(const KrausChannel &ch) {
        Eigen::Index d = ch.dim();
        Matrix m = Matrix::Zero(d * d, d * d);
        for (const auto &k : ch.operators()) {
            m += kron(k.conjugate(), k);
        }
        return Superoperator(d, std::move(m));
    }
    static Superoperator from_unitary(const Matrix &u) {
        return Superoperator(u.rows(), kron(u.conjugate(), u));
    }

    Eigen::Index dim() const {
        return dim_;
    }
    const Matrix &matrix() const {
        return m_;
    }

    /// `*this` applied after `first`.
    Superoperator after(const Superoperator &first) const {
        if (first.dim_ != dim_) {
            throw DimensionError("cannot compose superoperators of different dimension");
        }
        return Superoperator(dim_, m_ * first.m_);
    }
    Superoperator operator*(const Superoperator &rhs) const {
        return after(rhs);
    }

    Matrix apply(const Matrix &rho) const {
        if (rho.rows() != dim_) {
            throw DimensionError("state dimension does not match superoperator");
        }
        return unvectorize(m_ * vectorize(rho));
    }
    DensityMatrix apply(const DensityMatrix &rho) const {
        return DensityMatrix(apply(rho.matrix()));
    }

    /// <<1| S == <<1|, i.e. the map preserves trace.
    bool is_trace_preserving(double tol = kTraceTol) const {
        Vector one = vectorize(Matrix(Matrix::Identity(dim_, dim_)));
        return (one.adjoint() * m_ - one.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }

   private:
    Eigen::Index dim_;
    Matrix m_;
};

/// D_q(X) = q X + (1 - q) Tr[X] 1 / 2^n.
inline Superoperator depolarizing_superop(double q, int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ParameterError("depolarizing channel qubit count out of range");
    }
    double lower = 1.0 / (1.0 - std::pow(4.0, n_qubits));
    if (!(q >= lower - 1e-15 && q <= 1.0 + 1e-15)) {
        throw ParameterError("depolarizing parameter " + std::to_string(q) + " outside [" +
                             std::to_string(lower) + ", 1]");
    }
    Eigen::Index d = Eigen::Index{1} << n_qubits;
    Vector one = vectorize(Matrix(Matrix::Identity(d, d)));
    Matrix m = q * Matrix::Identity(d * d, d * d) + ((1.0 - q) / static_cast<double>(d)) * one * one.transpose();
    return Superoperator(d, std::move(m));
}

/// Pauli-sum Kraus form of D_q. Valid exactly on the same q range as the superoperator.
inline KrausChannel depolarizing_kraus(double q, int n_qubits) {
    depolarizing_superop(q, n_qubits);  // range check
    std::vector<Matrix> paulis{gates::identity(), gates::x(), gates::y(), gates::z()};
    Eigen::Index d = Eigen::Index{1} << n_qubits;
    double d2 = static_cast<double>(d * d);
    double w_id = std::max(0.0, q + (1.0 - q) / d2);
    double w_other = std::max(0.0, (1.0 - q) / d2);
    std::vector<Matrix> ops;
    auto n_terms = static_cast<unsigned>(d * d);
    for (unsigned code = 0; code < n_terms; ++code) {
        Matrix p = Matrix::Identity(1, 1);
        for (int t = n_qubits - 1; t >= 0; --t) {
            p = kron(p, paulis[(code >> (2 * t)) & 3u]);
        }
        double w = code == 0 ? w_id : w_other;
        if (w > 0) {
            ops.push_back(std::sqrt(w) * p);
        }
    }
    return KrausChannel(std::move(ops));
}

inline KrausChannel amplitude_damping_kraus(double gamma) {
    if (!(gamma >= 0 && gamma <= 1)) {
        throw ParameterError("amplitude damping gamma must lie in [0, 1]");
    }
    Matrix k0 = Matrix::Zero(2, 2);
    Matrix k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1 - gamma);
    k1(0, 1) = std::sqrt(gamma);
    return KrausChannel({k0, k1});
}

inline KrausChannel phase_damping_kraus(double lambda) {
    if (!(lambda >= 0 && lambda <= 1)) {
        throw ParameterError("phase damping lambda must lie in [0, 1]");
    }
    Matrix k0 = Matrix::Zero(2, 2);
    Matrix k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(1 - lambda);
    k1(1, 1) = std::sqrt(lambda);
    return KrausChannel({k0, k1});
}

/// Raw operator form; no validation, used on unnormalized branch states.
inline Matrix apply_kraus_raw(const Matrix &rho, const KrausChannel &ch, std::span<const int> targets, int n_qubits) {
    if (ch.n_qubits() != static_cast<int>(targets.size())) {
        throw DimensionError("channel acts on " + std::to_string(ch.n_qubits()) + " qubits but " +
                             std::to_string(targets.size()) + " targets were given");
    }
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto &k : ch.operators()) {
        Matrix full = embed_operator(k, targets, n_qubits);
        out += full * rho * full.adjoint();
    }
    return out;
}

inline DensityMatrix apply_kraus(const DensityMatrix &rho, const KrausChannel &ch, std::span<const int> targets) {
    return DensityMatrix(apply_kraus_raw(rho.matrix(), ch, targets, rho.n_qubits()));
}

inline DensityMatrix apply_unitary(const DensityMatrix &rho, const Matrix &u, std::span<const int> targets) {
    Matrix full = embed_operator(u, targets, rho.n_qubits());
    return DensityMatrix(full * rho.matrix() * full.adjoint());
}

/// Superoperator of `ch` acting on `targets` inside an `n_qubits` register.
inline Superoperator embed_channel(const KrausChannel &ch, std::span<const int> targets, int n_qubits) {
    std::vector<Matrix> ops;
    ops.reserve(ch.operators().size());
    for (const auto &k : ch.operators()) {
        ops.push_back(embed_operator(k, targets, n_qubits));
    }
    return Superoperator::from_kraus(KrausChannel(std::move(ops)));
}

/// Reduced state on `keep`; output qubit order follows ascending original index.
inline Matrix partial_trace_raw(const Matrix &rho, std::span<const int> keep, int n_qubits) {
    if (keep.empty()) {
        throw ParameterError("partial trace must keep at least one qubit");
    }
    std::vector<int> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw ParameterError("duplicate qubit in partial trace keep set");
    }
    for (int q : kept) {
        if (q < 0 || q >= n_qubits) {
            throw ParameterError("partial trace qubit " + std::to_string(q) + " out of range");
        }
    }
    unsigned keep_mask = 0;
    for (int q : kept) {
        keep_mask |= 1u << q;
    }
    auto reduced = [&](unsigned full) {
        unsigned l = 0;
        for (size_t t = 0; t < kept.size(); ++t) {
            l |= ((full >> kept[t]) & 1u) << t;
        }
        return l;
    };
    unsigned dim = 1u << n_qubits;
    Eigen::Index out_dim = Eigen::Index{1} << kept.size();
    Matrix out = Matrix::Zero(out_dim, out_dim);
    for (unsigned r = 0; r < dim; ++r) {
        for (unsigned c = 0; c < dim; ++c) {
            if ((r & ~keep_mask) == (c & ~keep_mask)) {
                out(reduced(r), reduced(c)) += rho(r, c);
            }
        }
    }
    return out;
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep) {
    return DensityMatrix(partial_trace_raw(rho.matrix(), keep, rho.n_qubits()));
}

/// Entanglement (process) fidelity with the identity, Tr[S] / d^2.
inline double process_fidelity(const Superoperator &s) {
    double d = static_cast<double>(s.dim());
    return s.matrix().trace().real() / (d * d);
}

inline double average_gate_fidelity(const Superoperator &s) {
    double d = static_cast<double>(s.dim());
    return (d * process_fidelity(s) + 1) / (d + 1);
}

inline double average_gate_error(const Superoperator &s) {
    return 1 - average_gate_fidelity(s);
}

}  // namespace dcrb

#endif
