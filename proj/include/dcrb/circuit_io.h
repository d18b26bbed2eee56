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

// Text form of a Circuit: a JSON object whose "instructions" array holds one
// record per line. Durations are stored in seconds; doubles are written with
// round-trip precision so parse(dump(c)) == c.

#ifndef DCRB_CIRCUIT_IO_H
#define DCRB_CIRCUIT_IO_H

#include <sstream>
#include <string>

#include <json.hpp>

#include "dcrb/circuit.h"

namespace dcrb {

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json &j) {
    auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto &row = j.at(r);
        if (static_cast<Eigen::Index>(row.size()) != n) {
            throw ValidationError("gate matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = cplx(row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>());
        }
    }
    return m;
}

inline nlohmann::json gate_to_json(const Gate &g) {
    nlohmann::json j{{"name", g.name}, {"targets", g.targets}, {"matrix", matrix_to_json(g.matrix)}};
    if (g.duration) {
        j["duration_s"] = *g.duration;
    }
    return j;
}

inline Gate gate_from_json(const nlohmann::json &j) {
    Gate g;
    g.name = j.at("name").get<std::string>();
    g.targets = j.at("targets").get<std::vector<int>>();
    g.matrix = matrix_from_json(j.at("matrix"));
    if (j.contains("duration_s")) {
        g.duration = j.at("duration_s").get<double>();
    }
    return g;
}

}  // namespace detail

inline nlohmann::json instruction_to_json(const Instruction &inst) {
    return std::visit(
        [](const auto &v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Gate>) {
                auto j = detail::gate_to_json(v);
                j["kind"] = "gate";
                return j;
            } else if constexpr (std::is_same_v<T, Idle>) {
                return {{"kind", "idle"}, {"targets", v.targets}, {"duration_s", v.duration},
                        {"role", role_name(v.role)}};
            } else if constexpr (std::is_same_v<T, Measure>) {
                nlohmann::json j{{"kind", "measure"}, {"targets", {v.qubit}}, {"clbit", v.clbit}};
                if (v.window) {
                    j["duration_s"] = *v.window;
                }
                return j;
            } else if constexpr (std::is_same_v<T, ConditionalGate>) {
                auto j = detail::gate_to_json(v.gate);
                j["kind"] = "conditional_gate";
                j["clbit"] = v.clbit;
                j["value"] = v.value;
                return j;
            } else {
                return {{"kind", "barrier"}};
            }
        },
        inst);
}

inline Instruction instruction_from_json(const nlohmann::json &j) {
    auto kind = j.at("kind").get<std::string>();
    if (kind == "gate") {
        return detail::gate_from_json(j);
    }
    if (kind == "idle") {
        Idle idle;
        idle.targets = j.at("targets").get<std::vector<int>>();
        idle.duration = j.at("duration_s").get<double>();
        idle.role = parse_idle_role(j.value("role", std::string("plain")));
        return idle;
    }
    if (kind == "measure") {
        Measure m;
        auto targets = j.at("targets").get<std::vector<int>>();
        if (targets.size() != 1) {
            throw ValidationError("measure record must have exactly one target");
        }
        m.qubit = targets[0];
        m.clbit = j.at("clbit").get<int>();
        if (j.contains("duration_s")) {
            m.window = j.at("duration_s").get<double>();
        }
        return m;
    }
    if (kind == "conditional_gate") {
        ConditionalGate c;
        c.gate = detail::gate_from_json(j);
        c.clbit = j.at("clbit").get<int>();
        c.value = j.at("value").get<int>();
        return c;
    }
    if (kind == "barrier") {
        return Barrier{};
    }
    throw ValidationError("unknown instruction kind '" + kind + "'");
}

inline std::string circuit_to_text(const Circuit &circ) {
    std::ostringstream out;
    out << "{\n  \"n_qubits\": " << circ.n_qubits() << ",\n  \"n_clbits\": " << circ.n_clbits()
        << ",\n  \"instructions\": [";
    const auto &insts = circ.instructions();
    for (size_t i = 0; i < insts.size(); ++i) {
        out << (i == 0 ? "\n    " : ",\n    ") << instruction_to_json(insts[i]).dump();
    }
    out << (insts.empty() ? "]\n}\n" : "\n  ]\n}\n");
    return out.str();
}

inline Circuit circuit_from_text(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(std::string("malformed circuit document: ") + e.what());
    }
    Circuit circ(j.at("n_qubits").get<int>(), j.at("n_clbits").get<int>());
    for (const auto &rec : j.at("instructions")) {
        circ.append(instruction_from_json(rec));
    }
    return circ;
}

}  // namespace dcrb

#endif
