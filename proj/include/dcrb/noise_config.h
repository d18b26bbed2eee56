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

// JSON noise configuration. Keys:
//   n_qubits                        optional register size
//   t1, t2                          microseconds; "inf" or null disables
//   p01, p10, qnd_flip              probabilities
//   detuning_hz, meas_phase_rad     per qubit
//   zz_hz                           number (every pair) or [[i, j, hz], ...]
//   depol_1q, depol_2q              depolarizing probabilities
//   tau_1q_ns, tau_2q_ns, tau_meas_ns, tau_ff_ns
// Per-qubit keys take a scalar (broadcast) or an array of length n_qubits.
// Missing keys keep the device defaults of NoiseModel::device_defaults.

#ifndef DCRB_NOISE_CONFIG_H
#define DCRB_NOISE_CONFIG_H

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dcrb/noise.h"

namespace dcrb {

namespace detail {

inline const std::set<std::string> &noise_keys() {
    static const std::set<std::string> keys{
        "n_qubits", "t1",       "t2",       "p01",       "p10",       "qnd_flip",    "detuning_hz", "zz_hz",
        "meas_phase_rad", "depol_1q", "depol_2q", "tau_1q_ns", "tau_2q_ns", "tau_meas_ns", "tau_ff_ns"};
    return keys;
}

inline double time_us_from_json(const nlohmann::json &v, const std::string &key) {
    if (v.is_null()) {
        return kInfinity;
    }
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") {
            return kInfinity;
        }
        throw ConfigError("'" + key + "' must be a number, \"inf\" or null");
    }
    if (!v.is_number()) {
        throw ConfigError("'" + key + "' must be a number, \"inf\" or null");
    }
    return v.get<double>() * 1e-6;
}

inline double number_from_json(const nlohmann::json &v, const std::string &key) {
    if (!v.is_number()) {
        throw ConfigError("'" + key + "' must be a number");
    }
    return v.get<double>();
}

template <typename F>
std::vector<double> per_qubit(const nlohmann::json &v, int n, const std::string &key, F convert) {
    if (v.is_array()) {
        if (static_cast<int>(v.size()) != n) {
            throw ConfigError("'" + key + "' has " + std::to_string(v.size()) + " entries for " + std::to_string(n) +
                              " qubits");
        }
        std::vector<double> out;
        for (const auto &e : v) {
            out.push_back(convert(e, key));
        }
        return out;
    }
    return std::vector<double>(static_cast<size_t>(n), convert(v, key));
}

inline nlohmann::json time_us_to_json(double seconds) {
    if (std::isinf(seconds)) {
        return "inf";
    }
    return seconds * 1e6;
}

}  // namespace detail

/// Builds a model for max(min_qubits, "n_qubits", longest per-qubit array) qubits.
inline NoiseModel noise_from_json(const nlohmann::json &j, int min_qubits = 1) {
    if (!j.is_object()) {
        throw ConfigError("noise configuration must be a JSON object");
    }
    for (const auto &[key, value] : j.items()) {
        if (!detail::noise_keys().count(key)) {
            throw ConfigError("unknown noise configuration key '" + key + "'");
        }
    }
    int n = min_qubits;
    if (j.contains("n_qubits")) {
        int declared = j.at("n_qubits").get<int>();
        if (declared < min_qubits) {
            throw ConfigError("n_qubits=" + std::to_string(declared) + " is smaller than the " +
                              std::to_string(min_qubits) + " qubits the experiment uses");
        }
        n = declared;
    } else {
        for (const auto &[key, value] : j.items()) {
            if (value.is_array() && key != "zz_hz") {
                n = std::max(n, static_cast<int>(value.size()));
            }
        }
    }
    if (n < 1 || n > 64) {
        throw ConfigError("unsupported qubit count " + std::to_string(n));
    }

    NoiseModel nm = NoiseModel::device_defaults(n);
    auto num = [](const nlohmann::json &v, const std::string &key) { return detail::number_from_json(v, key); };
    auto us = [](const nlohmann::json &v, const std::string &key) { return detail::time_us_from_json(v, key); };
    try {
        if (j.contains("t1")) {
            auto v = detail::per_qubit(j["t1"], n, "t1", us);
            for (int q = 0; q < n; ++q) nm.idle[q].t1 = v[q];
        }
        if (j.contains("t2")) {
            auto v = detail::per_qubit(j["t2"], n, "t2", us);
            for (int q = 0; q < n; ++q) nm.idle[q].t2 = v[q];
        }
        if (j.contains("p01")) {
            auto v = detail::per_qubit(j["p01"], n, "p01", num);
            for (int q = 0; q < n; ++q) nm.readout[q].p01 = v[q];
        }
        if (j.contains("p10")) {
            auto v = detail::per_qubit(j["p10"], n, "p10", num);
            for (int q = 0; q < n; ++q) nm.readout[q].p10 = v[q];
        }
        if (j.contains("qnd_flip")) {
            auto v = detail::per_qubit(j["qnd_flip"], n, "qnd_flip", num);
            for (int q = 0; q < n; ++q) nm.readout[q].qnd_flip = v[q];
        }
        if (j.contains("detuning_hz")) {
            nm.coupling.detuning_hz = detail::per_qubit(j["detuning_hz"], n, "detuning_hz", num);
        }
        if (j.contains("meas_phase_rad")) {
            nm.coupling.meas_phase_rad = detail::per_qubit(j["meas_phase_rad"], n, "meas_phase_rad", num);
        }
        if (j.contains("zz_hz")) {
            const auto &zz = j["zz_hz"];
            if (zz.is_number()) {
                for (int a = 0; a < n; ++a) {
                    for (int b = a + 1; b < n; ++b) {
                        nm.coupling.set_zz(a, b, zz.get<double>());
                    }
                }
            } else if (zz.is_array()) {
                for (const auto &e : zz) {
                    if (!e.is_array() || e.size() != 3) {
                        throw ConfigError("'zz_hz' entries must be [i, j, hz]");
                    }
                    int a = e[0].get<int>();
                    int b = e[1].get<int>();
                    if (a < 0 || b < 0 || a >= n || b >= n) {
                        throw ConfigError("'zz_hz' refers to a qubit outside the register");
                    }
                    nm.coupling.set_zz(a, b, detail::number_from_json(e[2], "zz_hz"));
                }
            } else {
                throw ConfigError("'zz_hz' must be a number or a list of [i, j, hz]");
            }
        }
        if (j.contains("depol_1q")) nm.gates.depol_1q = num(j["depol_1q"], "depol_1q");
        if (j.contains("depol_2q")) nm.gates.depol_2q = num(j["depol_2q"], "depol_2q");
        if (j.contains("tau_1q_ns")) nm.timing.tau_1q = num(j["tau_1q_ns"], "tau_1q_ns") * 1e-9;
        if (j.contains("tau_2q_ns")) nm.timing.tau_2q = num(j["tau_2q_ns"], "tau_2q_ns") * 1e-9;
        if (j.contains("tau_meas_ns")) nm.timing.tau_meas = num(j["tau_meas_ns"], "tau_meas_ns") * 1e-9;
        if (j.contains("tau_ff_ns")) nm.timing.tau_ff = num(j["tau_ff_ns"], "tau_ff_ns") * 1e-9;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed noise configuration: ") + e.what());
    } catch (const ParameterError &e) {
        throw ConfigError(e.what());
    }
    try {
        nm.validate();
    } catch (const ParameterError &e) {
        throw ConfigError(std::string("invalid noise configuration: ") + e.what());
    }
    return nm;
}

/// Fully resolved configuration (per-qubit arrays, explicit pairs).
inline nlohmann::json noise_to_json(const NoiseModel &nm) {
    nlohmann::json j;
    j["n_qubits"] = nm.n_qubits;
    nlohmann::json t1 = nlohmann::json::array(), t2 = nlohmann::json::array();
    nlohmann::json p01 = nlohmann::json::array(), p10 = nlohmann::json::array(), qnd = nlohmann::json::array();
    for (int q = 0; q < nm.n_qubits; ++q) {
        t1.push_back(detail::time_us_to_json(nm.idle[q].t1));
        t2.push_back(detail::time_us_to_json(nm.idle[q].t2));
        p01.push_back(nm.readout[q].p01);
        p10.push_back(nm.readout[q].p10);
        qnd.push_back(nm.readout[q].qnd_flip);
    }
    j["t1"] = t1;
    j["t2"] = t2;
    j["p01"] = p01;
    j["p10"] = p10;
    j["qnd_flip"] = qnd;
    j["detuning_hz"] = nm.coupling.detuning_hz;
    j["meas_phase_rad"] = nm.coupling.meas_phase_rad;
    nlohmann::json zz = nlohmann::json::array();
    for (const auto &[pair, hz] : nm.coupling.zz_hz) {
        zz.push_back({pair.first, pair.second, hz});
    }
    j["zz_hz"] = zz;
    j["depol_1q"] = nm.gates.depol_1q;
    j["depol_2q"] = nm.gates.depol_2q;
    j["tau_1q_ns"] = nm.timing.tau_1q * 1e9;
    j["tau_2q_ns"] = nm.timing.tau_2q * 1e9;
    j["tau_meas_ns"] = nm.timing.tau_meas * 1e9;
    j["tau_ff_ns"] = nm.timing.tau_ff * 1e9;
    return j;
}

inline NoiseModel load_noise_config(const std::string &path, int min_qubits = 1) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open noise configuration '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("noise configuration '" + path + "' is not valid JSON: " + e.what());
    }
    return noise_from_json(j, min_qubits);
}

}  // namespace dcrb

#endif
