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

#ifndef DCRB_CIRCUIT_H
#define DCRB_CIRCUIT_H

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcrb/qmath.h"

namespace dcrb {

/// Operation lengths in seconds.
struct Timing {
    double tau_1q = 60e-9;
    double tau_2q = 660e-9;
    double tau_meas = 1512e-9;
    double tau_ff = 1060e-9;

    void validate() const {
        if (!(tau_1q >= 0 && tau_2q >= 0 && tau_meas >= 0 && tau_ff >= 0)) {
            throw ParameterError("operation durations must be non-negative");
        }
    }
    bool operator==(const Timing &) const = default;
};

/// `duration` overrides the arity-based default from Timing when set.
struct Gate {
    std::string name;
    Matrix matrix;
    std::vector<int> targets;
    std::optional<double> duration;
};

/// What an idle window stands in for. A `feedforward` idle is the classical
/// decision latency between a measurement and the gates it conditions.
enum class IdleRole { plain, readout, feedforward };

struct Idle {
    double duration = 0;
    std::vector<int> targets;
    IdleRole role = IdleRole::plain;
};

/// Projective measurement at the start of its window. With `window` unset the
/// window lasts Timing::tau_meas on every qubit; builders that schedule the
/// window explicitly set it to 0 and emit their own readout idles.
struct Measure {
    int qubit = 0;
    int clbit = 0;
    std::optional<double> window;
};

/// Applies `gate` iff clbit `clbit` currently holds `value`.
struct ConditionalGate {
    int clbit = 0;
    int value = 1;
    Gate gate;
};

struct Barrier {};

using Instruction = std::variant<Gate, Idle, Measure, ConditionalGate, Barrier>;

inline const char *role_name(IdleRole r) {
    switch (r) {
        case IdleRole::plain:
            return "plain";
        case IdleRole::readout:
            return "readout";
        case IdleRole::feedforward:
            return "feedforward";
    }
    return "plain";
}

inline IdleRole parse_idle_role(const std::string &s) {
    if (s == "plain") return IdleRole::plain;
    if (s == "readout") return IdleRole::readout;
    if (s == "feedforward") return IdleRole::feedforward;
    throw ValidationError("unknown idle role '" + s + "'");
}

inline Gate make_gate(std::string name, Matrix m, std::vector<int> targets, std::optional<double> duration = {}) {
    return Gate{std::move(name), std::move(m), std::move(targets), duration};
}

class Circuit {
   public:
    Circuit() = default;
    Circuit(int n_qubits, int n_clbits) : n_qubits_(n_qubits), n_clbits_(n_clbits) {
        if (n_qubits < 1 || n_clbits < 0) {
            throw ParameterError("circuit needs at least one qubit and a non-negative register");
        }
    }

    int n_qubits() const {
        return n_qubits_;
    }
    int n_clbits() const {
        return n_clbits_;
    }
    const std::vector<Instruction> &instructions() const {
        return instructions_;
    }
    size_t size() const {
        return instructions_.size();
    }
    bool empty() const {
        return instructions_.empty();
    }

    /// Range-checks `inst` and places it at the tail. Whether conditional bits
    /// are written in time is a whole-circuit property; see validate().
    Circuit &append(Instruction inst) {
        check_instruction(inst);
        instructions_.push_back(std::move(inst));
        return *this;
    }

    Circuit &extend(const Circuit &other) {
        if (other.n_qubits_ > n_qubits_ || other.n_clbits_ > n_clbits_) {
            throw ValidationError("fragment does not fit into circuit");
        }
        for (const auto &inst : other.instructions_) {
            append(inst);
        }
        return *this;
    }

    /// Throws ValidationError when a conditional reads a bit that no earlier
    /// Measure has written.
    void validate() const {
        std::vector<bool> written(static_cast<size_t>(n_clbits_), false);
        for (size_t i = 0; i < instructions_.size(); ++i) {
            const auto &inst = instructions_[i];
            check_instruction(inst);
            if (const auto *m = std::get_if<Measure>(&inst)) {
                written[m->clbit] = true;
            } else if (const auto *c = std::get_if<ConditionalGate>(&inst)) {
                if (!written[c->clbit]) {
                    throw ValidationError("instruction " + std::to_string(i) + " conditions on clbit " +
                                          std::to_string(c->clbit) + " before any measurement writes it");
                }
            }
        }
    }

    size_t measurement_count() const {
        size_t n = 0;
        for (const auto &inst : instructions_) {
            n += std::holds_alternative<Measure>(inst);
        }
        return n;
    }

    bool operator==(const Circuit &other) const;

   private:
    void check_target(int q) const {
        if (q < 0 || q >= n_qubits_) {
            throw ValidationError("qubit " + std::to_string(q) + " out of range for " +
                                  std::to_string(n_qubits_) + "-qubit circuit");
        }
    }
    void check_clbit(int c) const {
        if (c < 0 || c >= n_clbits_) {
            throw ValidationError("clbit " + std::to_string(c) + " out of range for register of " +
                                  std::to_string(n_clbits_));
        }
    }
    void check_gate(const Gate &g) const {
        if (g.targets.empty()) {
            throw ValidationError("gate '" + g.name + "' has no targets");
        }
        for (int q : g.targets) {
            check_target(q);
        }
        for (size_t i = 0; i < g.targets.size(); ++i) {
            for (size_t j = i + 1; j < g.targets.size(); ++j) {
                if (g.targets[i] == g.targets[j]) {
                    throw ValidationError("gate '" + g.name + "' repeats a target");
                }
            }
        }
        if (g.matrix.rows() != (Eigen::Index{1} << g.targets.size())) {
            throw ValidationError("gate '" + g.name + "' matrix does not match its target count");
        }
        if (!is_unitary(g.matrix)) {
            throw ValidationError("gate '" + g.name + "' is not unitary");
        }
        if (g.duration && *g.duration < 0) {
            throw ValidationError("negative gate duration");
        }
    }
    void check_instruction(const Instruction &inst) const {
        std::visit(
            [&](const auto &v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Gate>) {
                    check_gate(v);
                } else if constexpr (std::is_same_v<T, Idle>) {
                    if (!(v.duration >= 0)) {
                        throw ValidationError("negative idle duration");
                    }
                    for (int q : v.targets) {
                        check_target(q);
                    }
                } else if constexpr (std::is_same_v<T, Measure>) {
                    check_target(v.qubit);
                    check_clbit(v.clbit);
                    if (v.window && *v.window < 0) {
                        throw ValidationError("negative measurement window");
                    }
                } else if constexpr (std::is_same_v<T, ConditionalGate>) {
                    check_clbit(v.clbit);
                    if (v.value != 0 && v.value != 1) {
                        throw ValidationError("conditional value must be 0 or 1");
                    }
                    if (v.gate.targets.size() != 1) {
                        throw ValidationError("conditional gates act on exactly one qubit");
                    }
                    check_gate(v.gate);
                }
            },
            inst);
    }

    int n_qubits_ = 1;
    int n_clbits_ = 0;
    std::vector<Instruction> instructions_;
};

inline bool operator==(const Gate &a, const Gate &b) {
    return a.name == b.name && a.targets == b.targets && a.duration == b.duration &&
           a.matrix.rows() == b.matrix.rows() && a.matrix == b.matrix;
}
inline bool operator==(const Idle &a, const Idle &b) {
    return a.duration == b.duration && a.targets == b.targets && a.role == b.role;
}
inline bool operator==(const Measure &a, const Measure &b) {
    return a.qubit == b.qubit && a.clbit == b.clbit && a.window == b.window;
}
inline bool operator==(const ConditionalGate &a, const ConditionalGate &b) {
    return a.clbit == b.clbit && a.value == b.value && a.gate == b.gate;
}
inline bool operator==(const Barrier &, const Barrier &) {
    return true;
}

inline bool Circuit::operator==(const Circuit &other) const {
    return n_qubits_ == other.n_qubits_ && n_clbits_ == other.n_clbits_ && instructions_ == other.instructions_;
}

inline double gate_duration(const Gate &g, const Timing &timing) {
    if (g.duration) {
        return *g.duration;
    }
    return g.targets.size() >= 2 ? timing.tau_2q : timing.tau_1q;
}

/// Serial duration of the circuit. A conditional gate reached while a
/// measurement's feedforward latency is still unpaid (no feedforward idle in
/// between) is charged tau_ff once, matching what the engine executes.
inline double total_duration(const Circuit &circ, const Timing &timing) {
    double total = 0;
    bool latency_pending = false;
    for (const auto &inst : circ.instructions()) {
        if (const auto *g = std::get_if<Gate>(&inst)) {
            total += gate_duration(*g, timing);
        } else if (const auto *idle = std::get_if<Idle>(&inst)) {
            total += idle->duration;
            if (idle->role == IdleRole::feedforward) {
                latency_pending = false;
            }
        } else if (const auto *m = std::get_if<Measure>(&inst)) {
            total += m->window.value_or(timing.tau_meas);
            latency_pending = true;
        } else if (const auto *c = std::get_if<ConditionalGate>(&inst)) {
            if (latency_pending) {
                total += timing.tau_ff;
                latency_pending = false;
            }
            total += gate_duration(c->gate, timing);
        }
    }
    return total;
}

/// Sub-circuit on `keep` (renumbered 0..keep.size()-1 in the given order).
/// Gates touching any other qubit are dropped; idles lose foreign targets.
inline Circuit restrict_to_qubits(const Circuit &circ, std::span<const int> keep) {
    std::vector<int> remap(static_cast<size_t>(circ.n_qubits()), -1);
    for (size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= circ.n_qubits()) {
            throw ParameterError("restriction qubit out of range");
        }
        remap[keep[i]] = static_cast<int>(i);
    }
    auto map_all = [&](const std::vector<int> &qs, std::vector<int> &out) {
        out.clear();
        for (int q : qs) {
            if (remap[q] < 0) {
                return false;
            }
            out.push_back(remap[q]);
        }
        return true;
    };
    Circuit out(static_cast<int>(keep.size()), circ.n_clbits());
    for (const auto &inst : circ.instructions()) {
        if (const auto *g = std::get_if<Gate>(&inst)) {
            Gate ng = *g;
            if (map_all(g->targets, ng.targets)) {
                out.append(std::move(ng));
            }
        } else if (const auto *idle = std::get_if<Idle>(&inst)) {
            Idle ni = *idle;
            ni.targets.clear();
            for (int q : idle->targets) {
                if (remap[q] >= 0) {
                    ni.targets.push_back(remap[q]);
                }
            }
            out.append(std::move(ni));
        } else if (const auto *m = std::get_if<Measure>(&inst)) {
            if (remap[m->qubit] >= 0) {
                Measure nm = *m;
                nm.qubit = remap[m->qubit];
                out.append(nm);
            }
        } else if (const auto *c = std::get_if<ConditionalGate>(&inst)) {
            ConditionalGate nc = *c;
            if (map_all(c->gate.targets, nc.gate.targets)) {
                out.append(std::move(nc));
            }
        } else {
            out.append(Barrier{});
        }
    }
    return out;
}

}  // namespace dcrb

#endif
