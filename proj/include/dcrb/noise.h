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

#ifndef DCRB_NOISE_H
#define DCRB_NOISE_H

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "dcrb/circuit.h"
#include "dcrb/qmath.h"
#include "dcrb/rng.h"

namespace dcrb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// p01: report 1 for |0>; p10: report 0 for |1>; qnd_flip: the post-measurement
/// state is flipped without affecting the reported bit.
struct ReadoutError {
    double p01 = 0;
    double p10 = 0;
    double qnd_flip = 0;

    static ReadoutError symmetric(double eps) {
        return {eps, eps, 0};
    }
    double flip_probability(int true_bit) const {
        return true_bit == 0 ? p01 : p10;
    }
    void validate() const {
        for (double p : {p01, p10, qnd_flip}) {
            if (!(p >= 0 && p <= 1)) {
                throw ParameterError("readout error probabilities must lie in [0, 1]");
            }
        }
    }
    bool operator==(const ReadoutError &) const = default;
};

/// Relaxation times in seconds; infinity disables the corresponding process.
struct IdleNoise {
    double t1 = kInfinity;
    double t2 = kInfinity;

    void validate() const {
        if (!(t1 > 0 && t2 > 0)) {
            throw ParameterError("T1 and T2 must be positive");
        }
        if (t2 > 2 * t1) {
            throw ParameterError("T2 must not exceed 2*T1");
        }
    }
    bool operator==(const IdleNoise &) const = default;
};

/// Static Hamiltonian terms in plain (non-angular) Hz, plus a deterministic
/// Z phase each qubit picks up whenever another qubit is measured.
struct CoherentCoupling {
    std::vector<double> detuning_hz;
    std::map<std::pair<int, int>, double> zz_hz;
    std::vector<double> meas_phase_rad;

    double zz(int a, int b) const {
        auto it = zz_hz.find(std::minmax(a, b));
        return it == zz_hz.end() ? 0.0 : it->second;
    }
    void set_zz(int a, int b, double hz) {
        if (a == b) {
            throw ParameterError("ZZ coupling needs two distinct qubits");
        }
        zz_hz[std::minmax(a, b)] = hz;
    }
    bool operator==(const CoherentCoupling &) const = default;
};

/// Depolarizing probabilities p in rho -> (1-p) rho + p Tr[rho] 1/d on the
/// gate targets. The average gate error is p/2 (1Q) and 3p/4 (2Q).
struct GateNoise {
    double depol_1q = 0;
    double depol_2q = 0;

    void validate() const {
        if (!(depol_1q >= 0 && depol_1q <= 1 && depol_2q >= 0 && depol_2q <= 1)) {
            throw ParameterError("gate depolarizing probabilities must lie in [0, 1]");
        }
    }
    bool operator==(const GateNoise &) const = default;
};

struct NoiseModel {
    int n_qubits = 0;
    std::vector<ReadoutError> readout;
    std::vector<IdleNoise> idle;
    CoherentCoupling coupling;
    GateNoise gates;
    Timing timing;

    /// Noiseless model with default timings.
    static NoiseModel ideal(int n_qubits, Timing timing = {}) {
        NoiseModel nm;
        nm.n_qubits = n_qubits;
        nm.readout.assign(n_qubits, ReadoutError{});
        nm.idle.assign(n_qubits, IdleNoise{});
        nm.coupling.detuning_hz.assign(n_qubits, 0.0);
        nm.coupling.meas_phase_rad.assign(n_qubits, 0.0);
        nm.timing = timing;
        return nm;
    }

    /// Median device figures: T1 208 us, T2 97 us, symmetric assignment error
    /// 2.2e-2, 2Q gate error 9.7e-3, 1Q gate error 2.4e-4.
    static NoiseModel device_defaults(int n_qubits) {
        NoiseModel nm = ideal(n_qubits);
        nm.readout.assign(n_qubits, ReadoutError::symmetric(2.2e-2));
        nm.idle.assign(n_qubits, IdleNoise{208e-6, 97e-6});
        nm.gates.depol_1q = 2 * 2.4e-4;
        nm.gates.depol_2q = 9.7e-3 * 4.0 / 3.0;
        return nm;
    }

    void validate() const {
        if (n_qubits < 1) {
            throw ConfigError("noise model needs at least one qubit");
        }
        auto n = static_cast<size_t>(n_qubits);
        if (readout.size() != n || idle.size() != n || coupling.detuning_hz.size() != n ||
            coupling.meas_phase_rad.size() != n) {
            throw ConfigError("noise model parameter counts do not match its qubit count");
        }
        for (const auto &r : readout) {
            r.validate();
        }
        for (const auto &i : idle) {
            i.validate();
        }
        for (const auto &[pair, hz] : coupling.zz_hz) {
            if (pair.first < 0 || pair.second >= n_qubits || pair.first == pair.second) {
                throw ConfigError("ZZ coupling refers to an unknown qubit pair");
            }
            if (!std::isfinite(hz)) {
                throw ConfigError("ZZ coupling must be finite");
            }
        }
        for (double v : coupling.detuning_hz) {
            if (!std::isfinite(v)) {
                throw ConfigError("detuning must be finite");
            }
        }
        for (double v : coupling.meas_phase_rad) {
            if (!std::isfinite(v)) {
                throw ConfigError("measurement-induced phase must be finite");
            }
        }
        gates.validate();
        timing.validate();
    }

    /// Parameters of `keep`, renumbered in the given order.
    NoiseModel restricted(std::span<const int> keep) const {
        NoiseModel out;
        out.n_qubits = static_cast<int>(keep.size());
        out.gates = gates;
        out.timing = timing;
        for (int q : keep) {
            if (q < 0 || q >= n_qubits) {
                throw ConfigError("qubit " + std::to_string(q) + " is not covered by the noise model");
            }
            out.readout.push_back(readout[q]);
            out.idle.push_back(idle[q]);
            out.coupling.detuning_hz.push_back(coupling.detuning_hz[q]);
            out.coupling.meas_phase_rad.push_back(coupling.meas_phase_rad[q]);
        }
        for (size_t a = 0; a < keep.size(); ++a) {
            for (size_t b = a + 1; b < keep.size(); ++b) {
                double hz = coupling.zz(keep[a], keep[b]);
                if (hz != 0) {
                    out.coupling.set_zz(static_cast<int>(a), static_cast<int>(b), hz);
                }
            }
        }
        return out;
    }

    bool operator==(const NoiseModel &) const = default;
};

/// Amplitude damping with gamma = 1 - exp(-tau/T1) followed by pure dephasing
/// chosen so that coherences decay as exp(-tau/T2) overall.
inline KrausChannel idle_channel(double t1, double t2, double tau) {
    if (!(tau >= 0)) {
        throw ParameterError("idle duration must be non-negative");
    }
    IdleNoise{t1, t2}.validate();
    double survive = std::exp(-tau / t1);  // 1 - gamma
    double gamma = 1 - survive;
    // Remaining coherence factor after amplitude damping: exp(-tau/T2 + tau/(2 T1)).
    double dephase_keep = std::exp(-2 * tau / t2 + tau / t1);  // 1 - lambda
    double lambda = std::clamp(1 - dephase_keep, 0.0, 1.0);

    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1;
    k0(1, 1) = std::sqrt(survive * (1 - lambda));
    std::vector<Matrix> ops{k0};
    if (gamma > 0) {
        Matrix k1 = Matrix::Zero(2, 2);
        k1(0, 1) = std::sqrt(gamma);
        ops.push_back(k1);
    }
    if (lambda > 0) {
        Matrix k2 = Matrix::Zero(2, 2);
        k2(1, 1) = std::sqrt(lambda * survive);
        ops.push_back(k2);
    }
    return KrausChannel(std::move(ops));
}

/// exp(-i 2 pi H tau) for
///   H = sum_i Delta_i/2 (1 - Z_i) + sum_{i<j} zeta_ij/2 (1 - Z_i)(1 - Z_j),
/// i.e. energy Delta_i per excited qubit and 2 zeta_ij when both are excited.
/// `qubits[t]` is local bit t of the returned diagonal matrix.
inline Matrix coherent_idle_unitary(const CoherentCoupling &coupling, std::span<const int> qubits, double tau) {
    if (!(tau >= 0)) {
        throw ParameterError("idle duration must be non-negative");
    }
    int k = static_cast<int>(qubits.size());
    Eigen::Index dim = Eigen::Index{1} << k;
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double energy = 0;
        for (int t = 0; t < k; ++t) {
            if (!((b >> t) & 1)) {
                continue;
            }
            int qt = qubits[t];
            if (static_cast<size_t>(qt) < coupling.detuning_hz.size()) {
                energy += coupling.detuning_hz[qt];
            }
            for (int s = t + 1; s < k; ++s) {
                if ((b >> s) & 1) {
                    energy += 2 * coupling.zz(qt, qubits[s]);
                }
            }
        }
        u(b, b) = std::polar(1.0, -2 * std::numbers::pi * energy * tau);
    }
    return u;
}

struct MeasurementSample {
    int reported = 0;
    int outcome = 0;
    DensityMatrix post;
};

/// Born-rule outcome, assignment flip of the reported bit, projection onto the
/// true outcome, then an independent QND flip of the post-measurement state.
inline MeasurementSample sample_measurement(const DensityMatrix &rho, int target, const ReadoutError &err, Rng &rng) {
    if (target < 0 || target >= rho.n_qubits()) {
        throw ParameterError("measured qubit out of range");
    }
    double p0 = std::clamp(rho.probability_zero(target), 0.0, 1.0);
    int outcome = uniform01(rng) < p0 ? 0 : 1;
    int reported = uniform01(rng) < err.flip_probability(outcome) ? 1 - outcome : outcome;

    Matrix m = rho.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (((i >> target) & 1) != outcome || ((j >> target) & 1) != outcome) {
                m(i, j) = 0;
            }
        }
    }
    m /= outcome == 0 ? p0 : 1 - p0;
    int t[] = {target};
    if (err.qnd_flip > 0) {
        Matrix x = embed_operator(gates::x(), t, rho.n_qubits());
        m = (1 - err.qnd_flip) * m + err.qnd_flip * (x * m * x);
    }
    return {reported, outcome, DensityMatrix(std::move(m))};
}

}  // namespace dcrb

#endif
