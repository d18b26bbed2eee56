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

// Dynamic-circuit blocks and interleaved 1Q RB sequence construction.

#ifndef DCRB_RBPROTO_H
#define DCRB_RBPROTO_H

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcrb/circuit.h"
#include "dcrb/clifford.h"
#include "dcrb/rng.h"

namespace dcrb {

enum class BlockKind { h_cnot, z_c0, z_c1, i_c0, i_c1, delay };
enum class DdMode { none, mdd, ffdd };

inline constexpr std::array<BlockKind, 6> kAllBlockKinds{BlockKind::h_cnot, BlockKind::z_c0, BlockKind::z_c1,
                                                         BlockKind::i_c0,   BlockKind::i_c1, BlockKind::delay};
inline constexpr std::array<DdMode, 3> kAllDdModes{DdMode::none, DdMode::mdd, DdMode::ffdd};

inline std::string_view to_string(BlockKind k) {
    switch (k) {
        case BlockKind::h_cnot:
            return "h_cnot";
        case BlockKind::z_c0:
            return "z_c0";
        case BlockKind::z_c1:
            return "z_c1";
        case BlockKind::i_c0:
            return "i_c0";
        case BlockKind::i_c1:
            return "i_c1";
        case BlockKind::delay:
            return "delay";
    }
    return "?";
}

inline std::string_view to_string(DdMode m) {
    switch (m) {
        case DdMode::none:
            return "none";
        case DdMode::mdd:
            return "mdd";
        case DdMode::ffdd:
            return "ffdd";
    }
    return "?";
}

inline BlockKind parse_block_kind(std::string_view s) {
    for (auto k : kAllBlockKinds) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw ConfigError("unknown block kind '" + std::string(s) + "' (expected h_cnot, z_c0, z_c1, i_c0, i_c1, delay)");
}

inline DdMode parse_dd_mode(std::string_view s) {
    for (auto m : kAllDdModes) {
        if (to_string(m) == s) {
            return m;
        }
    }
    throw ConfigError("unknown dd mode '" + std::string(s) + "' (expected none, mdd, ffdd)");
}

struct BlockSpec {
    BlockKind kind = BlockKind::z_c0;
    DdMode dd = DdMode::none;
    /// Whether the data and measured qubits share a coupler (needed by H_CNOT).
    bool connected = true;

    void validate() const {
        if (kind == BlockKind::h_cnot && !connected) {
            throw ConfigError("h_cnot needs connectivity between data and measured qubits");
        }
    }
};

struct RBConfig {
    /// Clifford counts l; each must be a multiple of k.
    std::vector<int> lengths{0, 25, 50, 100, 150, 200, 300};
    int k = 5;
    int seeds = 20;
    int shots = 300;
    std::vector<int> data_qubits{0};
    int measured_qubit = 1;

    void validate() const {
        if (k < 1) {
            throw ConfigError("k must be at least 1");
        }
        if (seeds < 1 || shots < 1) {
            throw ConfigError("seeds and shots must be at least 1");
        }
        if (lengths.empty()) {
            throw ConfigError("at least one sequence length is required");
        }
        for (int l : lengths) {
            if (l < 0 || l % k != 0) {
                throw ConfigError("length " + std::to_string(l) + " is not a non-negative multiple of k=" +
                                  std::to_string(k));
            }
        }
        if (data_qubits.empty()) {
            throw ConfigError("at least one data qubit is required");
        }
        for (size_t i = 0; i < data_qubits.size(); ++i) {
            if (data_qubits[i] < 0 || data_qubits[i] == measured_qubit) {
                throw ConfigError("data qubits must be non-negative and distinct from the measured qubit");
            }
            for (size_t j = i + 1; j < data_qubits.size(); ++j) {
                if (data_qubits[i] == data_qubits[j]) {
                    throw ConfigError("duplicate data qubit");
                }
            }
        }
        if (measured_qubit < 0) {
            throw ConfigError("measured qubit must be non-negative");
        }
    }

    int n_qubits() const {
        int n = measured_qubit;
        for (int q : data_qubits) {
            n = std::max(n, q);
        }
        return n + 1;
    }

    /// x-axis of the decay: number of interleaved blocks n = l/k.
    std::vector<double> block_counts() const {
        std::vector<double> n;
        for (int l : lengths) {
            n.push_back(static_cast<double>(l / k));
        }
        return n;
    }
};

/// Where a block lives inside the enclosing circuit.
struct BlockLayout {
    std::vector<int> data_qubits{0};
    int measured_qubit = 1;
    int n_qubits = 2;
    int n_clbits = 1;
    int clbit = 0;
};

namespace detail {

inline std::vector<int> block_qubits(const BlockLayout &layout) {
    std::vector<int> qs = layout.data_qubits;
    qs.push_back(layout.measured_qubit);
    return qs;
}

inline Gate dd_pulse(int q) {
    return make_gate("x_dd", gates::x(), {q}, 0.0);
}

inline void append_echo(Circuit &out, double window, const std::vector<int> &targets, std::span<const int> data) {
    out.append(Idle{window / 4, targets, IdleRole::readout});
    for (int q : data) {
        out.append(dd_pulse(q));
    }
    out.append(Idle{window / 2, targets, IdleRole::readout});
    for (int q : data) {
        out.append(dd_pulse(q));
    }
    out.append(Idle{window / 4, targets, IdleRole::readout});
}

}  // namespace detail

/// Inserts X-X echoes on the data qubits into the readout and feedforward
/// windows of `fragment`. Window durations are taken from the idles
/// themselves; DD pulses are zero-duration so the windows keep their length.
///
/// mdd:  [tau_M/4, X, tau_M/2, X, tau_M/4] then a bare tau_FF window.
/// ffdd: the same echo over the first tau_M - tau_FF, then
///       [tau_FF, X, tau_FF (feedforward), X], so the latency is the second arm.
inline Circuit apply_dd(const Circuit &fragment, DdMode mode, const Timing &timing, std::span<const int> data_qubits) {
    if (mode == DdMode::none) {
        return fragment;
    }
    if (mode == DdMode::ffdd && !(timing.tau_meas > timing.tau_ff)) {
        throw ConfigError("ffdd requires tau_meas > tau_ff");
    }
    Circuit out(fragment.n_qubits(), fragment.n_clbits());
    const auto &insts = fragment.instructions();
    bool found = false;
    for (size_t i = 0; i < insts.size(); ++i) {
        const auto *readout = std::get_if<Idle>(&insts[i]);
        const Idle *ff = i + 1 < insts.size() ? std::get_if<Idle>(&insts[i + 1]) : nullptr;
        if (readout == nullptr || readout->role != IdleRole::readout || ff == nullptr ||
            ff->role != IdleRole::feedforward) {
            out.append(insts[i]);
            continue;
        }
        found = true;
        const auto &targets = readout->targets;
        if (mode == DdMode::mdd) {
            detail::append_echo(out, readout->duration, targets, data_qubits);
            out.append(*ff);
        } else {
            double head = readout->duration - ff->duration;
            if (!(head > 0)) {
                throw ConfigError("ffdd requires the readout window to exceed the feedforward window");
            }
            detail::append_echo(out, head, targets, data_qubits);
            out.append(Idle{ff->duration, targets, IdleRole::readout});
            for (int q : data_qubits) {
                out.append(detail::dd_pulse(q));
            }
            out.append(*ff);
            for (int q : data_qubits) {
                out.append(detail::dd_pulse(q));
            }
        }
        ++i;
    }
    if (!found) {
        throw ConfigError("fragment has no readout/feedforward window to decouple");
    }
    return out;
}

/// One dynamic-circuit block on `layout`. Its ideal action is the identity on
/// the data qubits; all blocks except Delay return the measured qubit to |0>.
/// The measurement is projected at the start of an explicit tau_M readout
/// window followed by an explicit tau_FF feedforward window; conditional
/// gates come after, measured qubit first.
inline Circuit build_block(const BlockSpec &spec, const Timing &timing, const BlockLayout &layout) {
    spec.validate();
    timing.validate();
    Circuit out(layout.n_qubits, layout.n_clbits);
    const int m = layout.measured_qubit;
    const auto &data = layout.data_qubits;
    const auto all = detail::block_qubits(layout);

    auto windows = [&] {
        out.append(Idle{timing.tau_meas, all, IdleRole::readout});
        out.append(Idle{timing.tau_ff, all, IdleRole::feedforward});
    };
    auto measure = [&] {
        out.append(Measure{m, layout.clbit, 0.0});
        windows();
    };
    auto conditional = [&](const char *name, const Matrix &u, int q) {
        out.append(ConditionalGate{layout.clbit, 1, make_gate(name, u, {q})});
    };

    switch (spec.kind) {
        case BlockKind::h_cnot:
            out.append(make_gate("h", gates::h(), {m}));
            for (int d : data) {
                out.append(make_gate("cx", gates::cnot(), {m, d}));
            }
            measure();
            conditional("x", gates::x(), m);
            for (int d : data) {
                conditional("x", gates::x(), d);
            }
            break;
        case BlockKind::z_c0:
        case BlockKind::z_c1:
        case BlockKind::i_c0:
        case BlockKind::i_c1: {
            bool prepare_one = spec.kind == BlockKind::z_c1 || spec.kind == BlockKind::i_c1;
            bool use_z = spec.kind == BlockKind::z_c0 || spec.kind == BlockKind::z_c1;
            const char *name = use_z ? "z" : "id";
            Matrix u = use_z ? gates::z() : gates::identity();
            if (prepare_one) {
                out.append(make_gate("x", gates::x(), {m}));
                for (int d : data) {
                    out.append(make_gate(name, u, {d}));
                }
            }
            measure();
            conditional("x", gates::x(), m);
            for (int d : data) {
                conditional(name, u, d);
            }
            break;
        }
        case BlockKind::delay:
            windows();
            break;
    }
    return apply_dd(out, spec.dd, timing, data);
}

namespace detail {

inline Circuit build_rb_circuit(const RBConfig &cfg, const std::optional<BlockSpec> &spec, const Timing &timing,
                                int length, uint64_t seed) {
    cfg.validate();
    if (length < 0 || length % cfg.k != 0) {
        throw ConfigError("length " + std::to_string(length) + " is not a non-negative multiple of k");
    }
    const auto &table = CliffordTable::instance();
    const int n_blocks = spec ? length / cfg.k : 0;
    const int n_data = static_cast<int>(cfg.data_qubits.size());
    Circuit circ(cfg.n_qubits(), n_blocks + n_data + 1);

    std::vector<std::vector<int>> streams(n_data);
    for (int d = 0; d < n_data; ++d) {
        Rng rng(derive_seed(seed, {0xc1ff0dULL, static_cast<uint64_t>(d)}));
        for (int j = 0; j < length; ++j) {
            streams[d].push_back(static_cast<int>(uniform_index(rng, CliffordTable::kSize)));
        }
    }

    BlockLayout layout{cfg.data_qubits, cfg.measured_qubit, circ.n_qubits(), circ.n_clbits(), 0};
    for (int j = 0; j < length; ++j) {
        for (int d = 0; d < n_data; ++d) {
            int c = streams[d][j];
            circ.append(make_gate(CliffordTable::gate_name(c), table.unitary(c), {cfg.data_qubits[d]}));
        }
        if (spec && (j + 1) % cfg.k == 0) {
            layout.clbit = (j + 1) / cfg.k - 1;
            circ.extend(build_block(*spec, timing, layout));
        }
    }
    for (int d = 0; d < n_data; ++d) {
        int inv = table.inverse_of_sequence(streams[d]);
        circ.append(make_gate(CliffordTable::gate_name(inv), table.unitary(inv), {cfg.data_qubits[d]}));
    }
    for (int d = 0; d < n_data; ++d) {
        circ.append(Measure{cfg.data_qubits[d], n_blocks + d, std::nullopt});
    }
    circ.append(Measure{cfg.measured_qubit, n_blocks + n_data, std::nullopt});
    return circ;
}

}  // namespace detail

/// Interleaved sequence of `length` random Cliffords per data qubit with a
/// block after every k of them, the per-qubit inverse, and terminal
/// measurements. Clbit b < l/k holds block b's mid-circuit result; then one
/// clbit per data qubit (in cfg order) and finally the measured qubit.
inline Circuit build_sequence(const RBConfig &cfg, const BlockSpec &spec, const Timing &timing, int length,
                              uint64_t seed) {
    spec.validate();
    return detail::build_rb_circuit(cfg, spec, timing, length, seed);
}

/// Standard 1Q RB sequence with no interleaved blocks (reference curve).
inline Circuit build_reference_sequence(const RBConfig &cfg, const Timing &timing, int length, uint64_t seed) {
    return detail::build_rb_circuit(cfg, std::nullopt, timing, length, seed);
}

/// Clbit that carries data qubit `data_index`'s terminal result.
inline int terminal_clbit(const Circuit &circ, const RBConfig &cfg, int data_index) {
    return circ.n_clbits() - 1 - static_cast<int>(cfg.data_qubits.size()) + data_index;
}

inline int measured_terminal_clbit(const Circuit &circ) {
    return circ.n_clbits() - 1;
}

}  // namespace dcrb

#endif
