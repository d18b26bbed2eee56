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

// Noisy execution of circuits. States are kept vectorized (column-stacked)
// throughout so every deterministic instruction is one superoperator and runs
// of them can be fused into a single matrix before any shot is taken.

#ifndef DCRB_ENGINE_H
#define DCRB_ENGINE_H

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "dcrb/circuit.h"
#include "dcrb/clifford.h"
#include "dcrb/decay_curve.h"
#include "dcrb/noise.h"
#include "dcrb/rbproto.h"
#include "dcrb/rng.h"

namespace dcrb {

inline constexpr size_t kMaxEnumeratedMeasurements = 16;

struct CompiledOp {
    enum class Kind { channel, measure, conditional };
    Kind kind = Kind::channel;
    /// channel: the map itself; measure: evolution after the projection;
    /// conditional: the map applied when the bit matches.
    Matrix superop;
    int qubit = -1;
    int clbit = -1;
    int value = 1;
    ReadoutError readout;
    /// Index of the last source instruction folded into this op.
    size_t source = 0;
};

struct CompiledCircuit {
    int n_qubits = 0;
    int n_clbits = 0;
    Eigen::Index dim = 0;
    std::vector<CompiledOp> ops;
};

namespace detail {

class SuperopBuilder {
   public:
    explicit SuperopBuilder(const NoiseModel &nm, int n_qubits) : nm_(nm), n_(n_qubits) {
        for (int q = 0; q < n_; ++q) {
            all_.push_back(q);
        }
    }

    const std::vector<int> &all_qubits() const {
        return all_;
    }

    /// Ideal unitary followed by depolarizing noise on the gate's targets.
    const Matrix &gate(const Gate &g) {
        for (const auto &entry : gate_cache_) {
            if (entry.targets == g.targets && entry.unitary == g.matrix) {
                return entry.superop;
            }
        }
        Matrix u = embed_operator(g.matrix, g.targets, n_);
        Matrix s = kron(u.conjugate(), u);
        double p = g.targets.size() == 1 ? nm_.gates.depol_1q : nm_.gates.depol_2q;
        if (p > 0) {
            s = depolarizer(g.targets, p) * s;
        }
        gate_cache_.push_back({g.targets, g.matrix, std::move(s)});
        return gate_cache_.back().superop;
    }

    /// Coherent Hamiltonian evolution on `targets` followed by T1/T2 on each.
    Matrix idle(const std::vector<int> &targets, double tau) {
        Eigen::Index d2 = Eigen::Index{1} << (2 * n_);
        if (tau == 0 || targets.empty()) {
            return Matrix::Identity(d2, d2);
        }
        Matrix u = embed_operator(coherent_idle_unitary(nm_.coupling, targets, tau), targets, n_);
        Matrix s = kron(u.conjugate(), u);
        for (int q : targets) {
            const auto &in = nm_.idle[q];
            if (std::isinf(in.t1) && std::isinf(in.t2)) {
                continue;
            }
            int t[] = {q};
            s = embed_channel(idle_channel(in.t1, in.t2, tau), t, n_).matrix() * s;
        }
        return s;
    }

    /// QND flip of the measured qubit, the measurement-induced phase on every
    /// other qubit, then the measurement window idle.
    Matrix after_measure(int qubit, double window) {
        Eigen::Index d2 = Eigen::Index{1} << (2 * n_);
        Matrix s = Matrix::Identity(d2, d2);
        double f = nm_.readout[qubit].qnd_flip;
        if (f > 0) {
            int t[] = {qubit};
            KrausChannel flip({std::sqrt(1 - f) * gates::identity(), std::sqrt(f) * gates::x()});
            s = embed_channel(flip, t, n_).matrix();
        }
        for (int q = 0; q < n_; ++q) {
            double phi = nm_.coupling.meas_phase_rad[q];
            if (q != qubit && phi != 0) {
                int t[] = {q};
                Matrix u = embed_operator(gates::rz(phi), t, n_);
                s = kron(u.conjugate(), u) * s;
            }
        }
        return idle(all_, window) * s;
    }

   private:
    Matrix depolarizer(const std::vector<int> &targets, double p) {
        auto it = depol_cache_.find(targets);
        if (it != depol_cache_.end()) {
            return it->second;
        }
        int k = static_cast<int>(targets.size());
        Matrix s = embed_channel(depolarizing_kraus(1 - p, k), targets, n_).matrix();
        depol_cache_.emplace(targets, s);
        return s;
    }

    struct GateEntry {
        std::vector<int> targets;
        Matrix unitary;
        Matrix superop;
    };

    const NoiseModel &nm_;
    int n_;
    std::vector<int> all_;
    std::deque<GateEntry> gate_cache_;
    std::map<std::vector<int>, Matrix> depol_cache_;
};

inline void push_channel(std::vector<CompiledOp> &ops, Matrix s, size_t source, bool fuse) {
    if (fuse && !ops.empty() && ops.back().kind == CompiledOp::Kind::channel) {
        ops.back().superop = s * ops.back().superop;
        ops.back().source = source;
        return;
    }
    CompiledOp op;
    op.kind = CompiledOp::Kind::channel;
    op.superop = std::move(s);
    op.source = source;
    ops.push_back(std::move(op));
}

}  // namespace detail

/// Lowers `circ` to superoperators under `nm`. Semantics:
///   Gate: unitary, then depolarizing on its targets.
///   Idle: coherent ZZ/detuning evolution, then T1/T2, on its targets.
///   Measure: projection and readout at the window start; afterwards QND
///     flip, measurement-induced phase on the other qubits, and the window
///     idle on all qubits (tau_meas when the window is unset).
///   ConditionalGate: if a measurement's feedforward latency has not been
///     paid by a feedforward idle, tau_ff is idled on all qubits first.
/// With `fuse`, consecutive channels and consecutive conditionals on the
/// same bit/value are multiplied together.
inline CompiledCircuit compile(const Circuit &circ, const NoiseModel &nm, bool fuse = true) {
    circ.validate();
    nm.validate();
    if (nm.n_qubits < circ.n_qubits()) {
        throw ConfigError("noise model covers " + std::to_string(nm.n_qubits) + " qubits but the circuit has " +
                          std::to_string(circ.n_qubits()));
    }
    if (circ.n_qubits() > kMaxQubits) {
        throw ResourceError("circuits are limited to " + std::to_string(kMaxQubits) + " qubits");
    }
    CompiledCircuit out;
    out.n_qubits = circ.n_qubits();
    out.n_clbits = circ.n_clbits();
    out.dim = Eigen::Index{1} << out.n_qubits;
    detail::SuperopBuilder build(nm, out.n_qubits);
    const auto &timing = nm.timing;
    bool latency_pending = false;

    const auto &insts = circ.instructions();
    for (size_t i = 0; i < insts.size(); ++i) {
        const auto &inst = insts[i];
        if (const auto *g = std::get_if<Gate>(&inst)) {
            detail::push_channel(out.ops, build.gate(*g), i, fuse);
        } else if (const auto *idle = std::get_if<Idle>(&inst)) {
            detail::push_channel(out.ops, build.idle(idle->targets, idle->duration), i, fuse);
            if (idle->role == IdleRole::feedforward) {
                latency_pending = false;
            }
        } else if (const auto *m = std::get_if<Measure>(&inst)) {
            CompiledOp op;
            op.kind = CompiledOp::Kind::measure;
            op.qubit = m->qubit;
            op.clbit = m->clbit;
            op.readout = nm.readout[m->qubit];
            op.superop = build.after_measure(m->qubit, m->window.value_or(timing.tau_meas));
            op.source = i;
            out.ops.push_back(std::move(op));
            latency_pending = true;
        } else if (const auto *c = std::get_if<ConditionalGate>(&inst)) {
            if (latency_pending) {
                detail::push_channel(out.ops, build.idle(build.all_qubits(), timing.tau_ff), i, fuse);
                latency_pending = false;
            }
            const Matrix &s = build.gate(c->gate);
            auto &ops = out.ops;
            if (fuse && !ops.empty() && ops.back().kind == CompiledOp::Kind::conditional &&
                ops.back().clbit == c->clbit && ops.back().value == c->value) {
                ops.back().superop = s * ops.back().superop;
                ops.back().source = i;
            } else {
                CompiledOp op;
                op.kind = CompiledOp::Kind::conditional;
                op.clbit = c->clbit;
                op.value = c->value;
                op.superop = s;
                op.source = i;
                ops.push_back(std::move(op));
            }
        }
    }
    return out;
}

namespace detail {

/// Zeroes every entry of the vectorized state not in the `outcome` block of `qubit`.
inline void project(Vector &v, Eigen::Index dim, int qubit, int outcome) {
    for (Eigen::Index j = 0; j < dim; ++j) {
        bool keep_col = ((j >> qubit) & 1) == outcome;
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (!keep_col || ((i >> qubit) & 1) != outcome) {
                v[j * dim + i] = 0;
            }
        }
    }
}

inline double population_zero(const Vector &v, Eigen::Index dim, int qubit) {
    double p = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (((i >> qubit) & 1) == 0) {
            p += v[i * dim + i].real();
        }
    }
    return p;
}

inline double vec_trace(const Vector &v, Eigen::Index dim) {
    double t = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        t += v[i * dim + i].real();
    }
    return t;
}

inline Vector ground_vector(Eigen::Index dim) {
    Vector v = Vector::Zero(dim * dim);
    v[0] = 1;
    return v;
}

}  // namespace detail

/// Called after each compiled op with the op's last source instruction and
/// the current (normalized) state.
using ShotObserver = std::function<void(size_t source, const Matrix &rho)>;

/// One trajectory. Each measurement draws exactly two uniforms (outcome,
/// then assignment), so the stream consumption is independent of outcomes.
/// Returns the classical register.
inline std::vector<int> run_shot(const CompiledCircuit &cc, Rng &rng, const ShotObserver &observer = {}) {
    std::vector<int> bits(static_cast<size_t>(cc.n_clbits), 0);
    const Eigen::Index dim = cc.dim;
    Vector v = detail::ground_vector(dim);
    Vector tmp(v.size());
    for (const auto &op : cc.ops) {
        switch (op.kind) {
            case CompiledOp::Kind::channel:
                tmp.noalias() = op.superop * v;
                v.swap(tmp);
                break;
            case CompiledOp::Kind::conditional:
                if (bits[op.clbit] == op.value) {
                    tmp.noalias() = op.superop * v;
                    v.swap(tmp);
                }
                break;
            case CompiledOp::Kind::measure: {
                double p0 = std::clamp(detail::population_zero(v, dim, op.qubit) / detail::vec_trace(v, dim), 0.0,
                                       1.0);
                double u_outcome = uniform01(rng);
                double u_report = uniform01(rng);
                int outcome = u_outcome < p0 ? 0 : 1;
                int reported = u_report < op.readout.flip_probability(outcome) ? 1 - outcome : outcome;
                bits[op.clbit] = reported;
                detail::project(v, dim, op.qubit, outcome);
                v /= detail::vec_trace(v, dim);
                tmp.noalias() = op.superop * v;
                v.swap(tmp);
                break;
            }
        }
        if (observer) {
            observer(op.source, unvectorize(v));
        }
    }
    return bits;
}

inline std::vector<int> run_shot(const Circuit &circ, const NoiseModel &nm, Rng &rng) {
    return run_shot(compile(circ, nm), rng);
}

/// Exact distribution over classical records.
struct BranchDistribution {
    std::map<std::vector<int>, double> records;

    double total() const {
        double t = 0;
        for (const auto &[bits, p] : records) {
            t += p;
        }
        return t;
    }
    /// Probability that `clbit` reads 0.
    double probability_zero(int clbit) const {
        double p = 0;
        for (const auto &[bits, w] : records) {
            if (bits.at(clbit) == 0) {
                p += w;
            }
        }
        return p;
    }
};

namespace detail {

/// Linear branch evolution of an arbitrary (possibly non-physical) input.
/// Branches are keyed by the classical record; a branch is dropped only when
/// its projected vector or its assignment weight is exactly zero, so the map
/// input -> sum of outputs stays linear.
inline std::map<std::vector<int>, Vector> evolve_branches(const CompiledCircuit &cc, const Vector &input) {
    const Eigen::Index dim = cc.dim;
    std::map<std::vector<int>, Vector> branches;
    branches.emplace(std::vector<int>(static_cast<size_t>(cc.n_clbits), 0), input);
    for (const auto &op : cc.ops) {
        switch (op.kind) {
            case CompiledOp::Kind::channel:
                for (auto &[bits, v] : branches) {
                    v = op.superop * v;
                }
                break;
            case CompiledOp::Kind::conditional:
                for (auto &[bits, v] : branches) {
                    if (bits[op.clbit] == op.value) {
                        v = op.superop * v;
                    }
                }
                break;
            case CompiledOp::Kind::measure: {
                std::map<std::vector<int>, Vector> next;
                for (const auto &[bits, v] : branches) {
                    for (int outcome = 0; outcome < 2; ++outcome) {
                        Vector projected = v;
                        project(projected, dim, op.qubit, outcome);
                        if ((projected.array() == cplx(0)).all()) {
                            continue;
                        }
                        double flip = op.readout.flip_probability(outcome);
                        for (int reported = 0; reported < 2; ++reported) {
                            double w = reported == outcome ? 1 - flip : flip;
                            if (w == 0) {
                                continue;
                            }
                            auto key = bits;
                            key[op.clbit] = reported;
                            Vector contrib = w * (op.superop * projected);
                            auto it = next.find(key);
                            if (it == next.end()) {
                                next.emplace(std::move(key), std::move(contrib));
                            } else {
                                it->second += contrib;
                            }
                        }
                    }
                }
                branches = std::move(next);
                break;
            }
        }
    }
    return branches;
}

inline void check_enumerable(const Circuit &circ) {
    if (circ.measurement_count() > kMaxEnumeratedMeasurements) {
        throw ResourceError("branch enumeration supports at most " + std::to_string(kMaxEnumeratedMeasurements) +
                            " measurements, circuit has " + std::to_string(circ.measurement_count()));
    }
}

}  // namespace detail

/// Follows every (outcome, reported bit) branch exactly from |0...0>.
inline BranchDistribution enumerate_branches(const Circuit &circ, const NoiseModel &nm) {
    detail::check_enumerable(circ);
    auto cc = compile(circ, nm);
    BranchDistribution out;
    for (const auto &[bits, v] : detail::evolve_branches(cc, detail::ground_vector(cc.dim))) {
        out.records[bits] += detail::vec_trace(v, cc.dim);
    }
    return out;
}

/// Map from the input state to the record-averaged output state.
inline Superoperator circuit_channel(const Circuit &circ, const NoiseModel &nm) {
    detail::check_enumerable(circ);
    auto cc = compile(circ, nm);
    Eigen::Index d2 = cc.dim * cc.dim;
    Matrix s = Matrix::Zero(d2, d2);
    for (Eigen::Index c = 0; c < d2; ++c) {
        Vector e = Vector::Zero(d2);
        e[c] = 1;
        for (const auto &[bits, v] : detail::evolve_branches(cc, e)) {
            s.col(c) += v;
        }
    }
    return Superoperator(cc.dim, std::move(s));
}

/// Channel of one block on a (data = qubit 0, measured = qubit 1) pair.
/// `pair_nm` must describe exactly those two qubits in that order.
inline Superoperator block_channel(const BlockSpec &spec, const NoiseModel &pair_nm) {
    BlockLayout layout{{0}, 1, 2, 1, 0};
    return circuit_channel(build_block(spec, pair_nm.timing, layout), pair_nm);
}

/// Average of (C^dag (x) 1) S (C (x) 1) over the 24 single-qubit Cliffords
/// acting on `qubit`.
inline Superoperator clifford_twirl(const Superoperator &s, int qubit) {
    int n = qubits_for_dim(s.dim());
    const auto &table = CliffordTable::instance();
    int t[] = {qubit};
    Matrix acc = Matrix::Zero(s.matrix().rows(), s.matrix().cols());
    for (int c = 0; c < CliffordTable::kSize; ++c) {
        Matrix u = embed_operator(table.unitary(c), t, n);
        Matrix sc = kron(u.conjugate(), u);
        acc += sc.adjoint() * s.matrix() * sc;
    }
    return Superoperator(s.dim(), acc / static_cast<double>(CliffordTable::kSize));
}

/// Sequence-averaged survival probability of the data qubit (reported 0) for
/// each block count, computed exactly: random Cliffords twirl every segment
/// independently, so the average sequence is the product of twirled maps.
/// `pair_nm` is the (data, measured) pair model as in block_channel.
inline std::vector<double> exact_survival(const BlockSpec &spec, const NoiseModel &pair_nm, int k,
                                          const std::vector<int> &block_counts) {
    if (k < 1) {
        throw ConfigError("k must be at least 1");
    }
    Matrix twirled = clifford_twirl(block_channel(spec, pair_nm), 0).matrix();
    int data[] = {0};
    double p = pair_nm.gates.depol_1q;
    Matrix per_gate = embed_channel(depolarizing_kraus(1 - p, 1), data, 2).matrix();
    Matrix k_gates = Matrix::Identity(16, 16);
    for (int i = 0; i < k; ++i) {
        k_gates = per_gate * k_gates;
    }
    Matrix step = twirled * k_gates;
    const auto &ro = pair_nm.readout[0];

    std::vector<double> out;
    for (int n : block_counts) {
        if (n < 0) {
            throw ParameterError("block count must be non-negative");
        }
        Vector v = detail::ground_vector(4);
        for (int b = 0; b < n; ++b) {
            v = step * v;
        }
        v = per_gate * v;
        Matrix rho = partial_trace_raw(unvectorize(v), data, 2);
        out.push_back((1 - ro.p01) * rho(0, 0).real() + ro.p10 * rho(1, 1).real());
    }
    return out;
}

struct ExperimentResult {
    /// One curve per data qubit, in RBConfig order.
    std::vector<DecayCurve> data;
    /// Terminal reported-0 frequency of the measured qubit, pooled over pairs.
    DecayCurve measured;
};

namespace detail {

inline DecayCurve aggregate(const RBConfig &cfg, const std::vector<std::vector<long>> &zeros, long shots_per_seed,
                            int qubit) {
    DecayCurve curve;
    curve.block_counts = cfg.block_counts();
    curve.qubit = qubit;
    curve.seeds = cfg.seeds;
    curve.shots = cfg.shots;
    const int m = cfg.seeds;
    for (const auto &per_seed : zeros) {
        long total = 0;
        for (long z : per_seed) {
            total += z;
        }
        double mean = static_cast<double>(total) / static_cast<double>(shots_per_seed * m);
        double se;
        if (m == 1) {
            se = std::sqrt(mean * (1 - mean) / static_cast<double>(shots_per_seed));
        } else {
            double ss = 0;
            for (long z : per_seed) {
                double f = static_cast<double>(z) / static_cast<double>(shots_per_seed);
                ss += (f - mean) * (f - mean);
            }
            se = std::sqrt(ss / (m - 1)) / std::sqrt(static_cast<double>(m));
        }
        curve.means.push_back(mean);
        curve.stderrs.push_back(se);
    }
    return curve;
}

/// Runs fn(i) for i in [0, n) on `jobs` threads; rethrows the first failure.
inline void parallel_for(size_t n, int jobs, const std::function<void(size_t)> &fn) {
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    if (jobs <= 1) {
        for (size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = n;
            }
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) {
        threads.emplace_back(worker);
    }
    for (auto &t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace detail

/// Seed of the random sequence for (length index, seed index).
inline uint64_t sequence_seed(uint64_t master, size_t length_index, int seed_index) {
    return derive_seed(master, {0x5e0ULL, static_cast<uint64_t>(length_index), static_cast<uint64_t>(seed_index)});
}

/// Monte Carlo interleaved RB. Every (length, seed) unit draws its own
/// sequence; each data qubit is simulated with the measured qubit as an
/// independent pair; each shot has its own counter-derived RNG stream, and
/// counts are reduced in a fixed order, so results do not depend on `jobs`.
inline ExperimentResult run_experiment(const RBConfig &cfg, const BlockSpec &spec, const NoiseModel &nm,
                                       uint64_t master_seed, int jobs = 1) {
    cfg.validate();
    spec.validate();
    nm.validate();
    if (nm.n_qubits < cfg.n_qubits()) {
        throw ConfigError("noise model does not cover every qubit used by the experiment");
    }
    const size_t n_len = cfg.lengths.size();
    const size_t n_pairs = cfg.data_qubits.size();
    std::vector<NoiseModel> pair_models;
    for (int d : cfg.data_qubits) {
        int keep[] = {d, cfg.measured_qubit};
        pair_models.push_back(nm.restricted(keep));
    }

    // zeros[pair][length][seed]; the measured qubit is pooled at index n_pairs.
    std::vector<std::vector<std::vector<long>>> zeros(
        n_pairs + 1, std::vector<std::vector<long>>(n_len, std::vector<long>(cfg.seeds, 0)));

    const size_t n_units = n_len * static_cast<size_t>(cfg.seeds);
    detail::parallel_for(n_units, jobs, [&](size_t unit) {
        size_t li = unit / cfg.seeds;
        int s = static_cast<int>(unit % cfg.seeds);
        Circuit circ = build_sequence(cfg, spec, nm.timing, cfg.lengths[li], sequence_seed(master_seed, li, s));
        const int data_bit = circ.n_clbits() - 1 - static_cast<int>(n_pairs);
        const int meas_bit = circ.n_clbits() - 1;
        for (size_t p = 0; p < n_pairs; ++p) {
            int keep[] = {cfg.data_qubits[p], cfg.measured_qubit};
            auto cc = compile(restrict_to_qubits(circ, keep), pair_models[p]);
            long data_zero = 0;
            long meas_zero = 0;
            for (int shot = 0; shot < cfg.shots; ++shot) {
                Rng rng(derive_seed(master_seed, {0x5407ULL, static_cast<uint64_t>(li), static_cast<uint64_t>(s),
                                                  static_cast<uint64_t>(p), static_cast<uint64_t>(shot)}));
                auto bits = run_shot(cc, rng);
                data_zero += bits[data_bit + static_cast<int>(p)] == 0;
                meas_zero += bits[meas_bit] == 0;
            }
            zeros[p][li][s] = data_zero;
            zeros[n_pairs][li][s] += meas_zero;
        }
    });

    ExperimentResult result;
    for (size_t p = 0; p < n_pairs; ++p) {
        auto curve = detail::aggregate(cfg, zeros[p], cfg.shots, cfg.data_qubits[p]);
        curve.block = std::string(to_string(spec.kind));
        curve.dd = std::string(to_string(spec.dd));
        result.data.push_back(std::move(curve));
    }
    result.measured = detail::aggregate(cfg, zeros[n_pairs], static_cast<long>(cfg.shots) * n_pairs,
                                        cfg.measured_qubit);
    result.measured.block = std::string(to_string(spec.kind));
    result.measured.dd = std::string(to_string(spec.dd));
    return result;
}

}  // namespace dcrb

#endif
