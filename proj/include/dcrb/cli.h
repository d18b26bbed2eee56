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

// The `dcrb` command line: run, sweep and oracle subcommands. Every output
// file is rendered in memory first and only written (via a temporary name and
// a rename) once all work has succeeded, so a failure never leaves partial
// results behind.

#ifndef DCRB_CLI_H
#define DCRB_CLI_H

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcrb/analysis.h"
#include "dcrb/circuit_io.h"
#include "dcrb/engine.h"
#include "dcrb/noise_config.h"
#include "dcrb/oracle.h"
#include "dcrb/rbproto.h"

namespace dcrb {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace cli {

inline std::string trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string &s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

inline double parse_double(const std::string &s) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception &) {
        throw ConfigError("'" + s + "' is not a number");
    }
    if (pos != s.size()) {
        throw ConfigError("'" + s + "' is not a number");
    }
    return v;
}

/// Comma list of numbers; "a,b,...,z" continues the step b - a up to z.
inline std::vector<double> parse_number_list(const std::string &s) {
    auto items = split(s);
    std::vector<double> out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (items[i] != "...") {
            out.push_back(parse_double(items[i]));
            continue;
        }
        if (out.size() < 2 || i + 1 >= items.size()) {
            throw ConfigError("'...' needs two values before it and one after it");
        }
        double step = out[out.size() - 1] - out[out.size() - 2];
        double last = parse_double(items[i + 1]);
        if (!(step > 0) || last < out.back()) {
            throw ConfigError("'...' needs an increasing sequence");
        }
        size_t n_steps = static_cast<size_t>(std::llround((last - out.back()) / step));
        double start = out.back();
        for (size_t j = 1; j < n_steps; ++j) {
            out.push_back(start + static_cast<double>(j) * step);
        }
    }
    return out;
}

inline std::vector<int> parse_int_list(const std::string &s) {
    std::vector<int> out;
    for (double v : parse_number_list(s)) {
        if (v != std::floor(v)) {
            throw ConfigError("expected an integer, got " + std::to_string(v));
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Pending output files, committed together.
class OutputSet {
   public:
    void add(std::filesystem::path path, std::string content) {
        files_.emplace_back(std::move(path), std::move(content));
    }
    void commit() const {
        for (const auto &[path, content] : files_) {
            if (path.has_parent_path()) {
                std::filesystem::create_directories(path.parent_path());
            }
            auto tmp = path;
            tmp += ".tmp";
            {
                std::ofstream out(tmp, std::ios::binary);
                out << content;
                if (!out) {
                    throw ResourceError("cannot write " + tmp.string());
                }
            }
            std::filesystem::rename(tmp, path);
        }
    }
    const std::vector<std::pair<std::filesystem::path, std::string>> &files() const {
        return files_;
    }

   private:
    std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

struct RunArgs {
    std::string blocks = "z_c0";
    std::string dd = "none";
    std::string lengths = "0,25,50,100,150,200,300";
    int k = 5;
    int seeds = 20;
    int shots = 300;
    std::string noise;
    std::optional<uint64_t> seed;
    int jobs = 0;
    std::string out = ".";
    bool dump_circuits = false;
    int skip_depths = 0;
    std::optional<double> fix_b;
    std::string data_qubits = "0";
    int measured_qubit = 1;
    bool connected = true;
};

inline void add_run_options(CLI::App &app, RunArgs &a) {
    app.add_option("--block", a.blocks, "Comma list of blocks: h_cnot,z_c0,z_c1,i_c0,i_c1,delay")
        ->capture_default_str();
    app.add_option("--dd", a.dd, "Comma list of DD modes: none,mdd,ffdd")->capture_default_str();
    app.add_option("--lengths", a.lengths, "Clifford counts l, e.g. 0,25,50,...,300")->capture_default_str();
    app.add_option("--k", a.k, "Cliffords per block")->capture_default_str();
    app.add_option("--seeds", a.seeds, "Random sequences per length")->capture_default_str();
    app.add_option("--shots", a.shots, "Shots per sequence")->capture_default_str();
    app.add_option("--noise", a.noise, "Noise configuration (JSON); device defaults if omitted");
    app.add_option("--seed", a.seed, "Master seed (falls back to $DCRB_SEED, then 0)");
    app.add_option("--jobs", a.jobs, "Worker threads (0 = all cores); results do not depend on it");
    app.add_option("--out", a.out, "Output directory")->capture_default_str();
    app.add_flag("--dump-circuits", a.dump_circuits, "Also write the seed-0 circuit of every length");
    app.add_option("--skip-depths", a.skip_depths, "Exclude this many shortest depths from the fit");
    app.add_option("--fix-b", a.fix_b, "Hold the fit offset B at this value");
    app.add_option("--data-qubits", a.data_qubits, "Comma list of data qubits")->capture_default_str();
    app.add_option("--measured-qubit", a.measured_qubit, "Measured qubit")->capture_default_str();
    app.add_flag("!--disconnected", a.connected, "Declare data and measured qubits uncoupled (forbids h_cnot)");
}

inline uint64_t resolve_seed(const std::optional<uint64_t> &seed) {
    if (seed) {
        return *seed;
    }
    if (const char *env = std::getenv("DCRB_SEED")) {
        try {
            size_t pos = 0;
            uint64_t v = std::stoull(env, &pos);
            if (pos == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception &) {
        }
        throw ConfigError(std::string("DCRB_SEED='") + env + "' is not an unsigned integer");
    }
    return 0;
}

inline int resolve_jobs(int jobs) {
    if (jobs > 0) {
        return jobs;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Resolved {
    RBConfig cfg;
    std::vector<BlockSpec> specs;
    NoiseModel nm;
    uint64_t seed = 0;
    FitOptions fit;
};

inline Resolved resolve(const RunArgs &a) {
    Resolved r;
    r.cfg.lengths = parse_int_list(a.lengths);
    r.cfg.k = a.k;
    r.cfg.seeds = a.seeds;
    r.cfg.shots = a.shots;
    r.cfg.data_qubits = parse_int_list(a.data_qubits);
    r.cfg.measured_qubit = a.measured_qubit;
    r.cfg.validate();
    auto blocks = split(a.blocks);
    auto dds = split(a.dd);
    if (blocks.empty() || dds.empty()) {
        throw ConfigError("at least one block and one DD mode are required");
    }
    for (const auto &b : blocks) {
        for (const auto &d : dds) {
            BlockSpec spec{parse_block_kind(b), parse_dd_mode(d), a.connected};
            spec.validate();
            r.specs.push_back(spec);
        }
    }
    r.nm = a.noise.empty() ? NoiseModel::device_defaults(r.cfg.n_qubits())
                           : load_noise_config(a.noise, r.cfg.n_qubits());
    if (r.nm.n_qubits < r.cfg.n_qubits()) {
        throw ConfigError("noise model has fewer qubits than the experiment uses");
    }
    r.seed = resolve_seed(a.seed);
    r.fit.skip_depths = a.skip_depths;
    r.fit.fixed_b = a.fix_b;
    if (a.fix_b && !(*a.fix_b >= 0 && *a.fix_b <= 1)) {
        throw ConfigError("--fix-b must lie in [0, 1]");
    }
    return r;
}

inline nlohmann::json config_json(const Resolved &r, const BlockSpec &spec) {
    nlohmann::json j;
    j["block"] = std::string(to_string(spec.kind));
    j["dd"] = std::string(to_string(spec.dd));
    j["lengths"] = r.cfg.lengths;
    j["k"] = r.cfg.k;
    j["seeds"] = r.cfg.seeds;
    j["shots"] = r.cfg.shots;
    j["data_qubits"] = r.cfg.data_qubits;
    j["measured_qubit"] = r.cfg.measured_qubit;
    j["noise"] = noise_to_json(r.nm);
    nlohmann::json fit;
    fit["skip_depths"] = r.fit.skip_depths;
    fit["fix_b"] = r.fit.fixed_b ? nlohmann::json(*r.fit.fixed_b) : nlohmann::json(nullptr);
    j["fit"] = fit;
    return j;
}

inline std::string provenance(const std::string &command, const nlohmann::json &config, uint64_t seed) {
    return "# dcrb " + command + "\n# config: " + config.dump() + "\n# seed: " + std::to_string(seed) + "\n";
}

inline std::string curve_csv(const std::vector<const DecayCurve *> &curves, const std::string &header) {
    std::string out = header + "n_blocks,qubit,mean,stderr\n";
    for (const auto *c : curves) {
        for (size_t i = 0; i < c->size(); ++i) {
            out += fmt(c->block_counts[i]) + "," + std::to_string(c->qubit) + "," + fmt(c->means[i]) + "," +
                   fmt(c->stderrs[i]) + "\n";
        }
    }
    return out;
}

inline TheoryParams theory_params(const NoiseModel &nm, int data_qubit, int measured_qubit) {
    TheoryParams p;
    const auto &ro = nm.readout[measured_qubit];
    p.eps_r = (ro.p01 + ro.p10) / 2;
    p.eps_2q = std::min(1.0, 0.75 * nm.gates.depol_2q);
    p.t1 = nm.idle[data_qubit].t1;
    p.t2 = nm.idle[data_qubit].t2;
    p.tau = nm.timing.tau_meas + nm.timing.tau_ff;
    return p;
}

struct FitRecord {
    FitResult fit;
    double alpha_ref = 1;
    double predicted = 0;
    std::optional<EpsilonEstimate> interleaved;
};

inline FitRecord fit_record(const DecayCurve &curve, const Resolved &r, const BlockSpec &spec) {
    FitRecord rec;
    rec.fit = fit_exponential(curve, r.fit);
    rec.alpha_ref = reference_alpha(r.nm.gates.depol_1q, r.cfg.k);
    rec.predicted = predicted_error(spec.kind, theory_params(r.nm, curve.qubit, r.cfg.measured_qubit));
    if (rec.fit.converged()) {
        rec.interleaved = extract_epsilon(rec.fit, rec.alpha_ref);
    }
    return rec;
}

inline nlohmann::json fit_json(const FitRecord &rec, const BlockSpec &spec, int data_qubit, int measured_qubit) {
    const auto &f = rec.fit;
    nlohmann::json j;
    j["block"] = std::string(to_string(spec.kind));
    j["dd"] = std::string(to_string(spec.dd));
    j["data_qubit"] = data_qubit;
    j["measured_qubit"] = measured_qubit;
    j["A"] = f.A;
    j["B"] = f.B;
    j["alpha"] = f.alpha;
    j["alpha_err"] = f.alpha_err;
    j["epsilon"] = f.epsilon;
    j["epsilon_err"] = f.epsilon_err;
    j["converged"] = f.converged();
    j["status"] = to_string(f.status);
    j["alpha_ref"] = rec.alpha_ref;
    j["epsilon_interleaved"] = rec.interleaved ? nlohmann::json(rec.interleaved->epsilon) : nlohmann::json(nullptr);
    j["epsilon_interleaved_err"] = rec.interleaved ? nlohmann::json(rec.interleaved->err) : nlohmann::json(nullptr);
    j["predicted"] = rec.predicted;
    return j;
}

inline std::string pad(std::string s, size_t w) {
    if (s.size() < w) {
        s.append(w - s.size(), ' ');
    }
    return s;
}

inline std::string stem(const BlockSpec &spec) {
    return std::string(to_string(spec.kind)) + "_" + std::string(to_string(spec.dd));
}

template <typename Fn>
int guarded(std::ostream &err, Fn &&fn) {
    try {
        return fn();
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

inline int parse_app(CLI::App &app, const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
                     bool &done) {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    done = false;
    try {
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        done = true;
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        done = true;
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace cli

/// `dcrb run`: one experiment per (block, dd) pair; writes
/// curve_<block>_<dd>.csv, measured_<block>_<dd>.csv, fit_<block>_<dd>.json.
inline int cmd_run(const std::vector<std::string> &args, std::ostream &out = std::cout,
                   std::ostream &err = std::cerr) {
    CLI::App app{"Interleaved RB of dynamic-circuit blocks", "dcrb run"};
    cli::RunArgs a;
    cli::add_run_options(app, a);
    bool done;
    int code = cli::parse_app(app, args, out, err, done);
    if (done) {
        return code;
    }
    return cli::guarded(err, [&] {
        auto r = cli::resolve(a);
        int jobs = cli::resolve_jobs(a.jobs);
        std::filesystem::path dir(a.out);
        cli::OutputSet files;
        std::ostringstream table;
        table << cli::pad("block", 8) << cli::pad("dd", 6) << cli::pad("qubit", 7) << cli::pad("alpha", 13)
              << cli::pad("epsilon", 13) << cli::pad("eps_interl", 13) << cli::pad("predicted", 13) << "status\n";
        for (const auto &spec : r.specs) {
            auto config = cli::config_json(r, spec);
            std::string header = cli::provenance("run", config, r.seed);
            auto result = run_experiment(r.cfg, spec, r.nm, r.seed, jobs);

            std::vector<const DecayCurve *> curves;
            nlohmann::json fits = nlohmann::json::array();
            for (size_t p = 0; p < result.data.size(); ++p) {
                const auto &curve = result.data[p];
                curves.push_back(&curve);
                auto rec = cli::fit_record(curve, r, spec);
                fits.push_back(cli::fit_json(rec, spec, curve.qubit, r.cfg.measured_qubit));
                table << cli::pad(std::string(to_string(spec.kind)), 8) << cli::pad(std::string(to_string(spec.dd)), 6)
                      << cli::pad(std::to_string(curve.qubit), 7) << cli::pad(cli::fmt_short(rec.fit.alpha), 13)
                      << cli::pad(cli::fmt_short(rec.fit.epsilon), 13)
                      << cli::pad(rec.interleaved ? cli::fmt_short(rec.interleaved->epsilon) : "-", 13)
                      << cli::pad(cli::fmt_short(rec.predicted), 13) << to_string(rec.fit.status) << "\n";
            }
            files.add(dir / ("curve_" + cli::stem(spec) + ".csv"), cli::curve_csv(curves, header));
            files.add(dir / ("measured_" + cli::stem(spec) + ".csv"), cli::curve_csv({&result.measured}, header));
            nlohmann::json doc;
            doc["command"] = "run";
            doc["seed"] = r.seed;
            doc["config"] = config;
            doc["fits"] = fits;
            files.add(dir / ("fit_" + cli::stem(spec) + ".json"), doc.dump(2) + "\n");

            if (a.dump_circuits) {
                for (size_t li = 0; li < r.cfg.lengths.size(); ++li) {
                    auto circ = build_sequence(r.cfg, spec, r.nm.timing, r.cfg.lengths[li],
                                               sequence_seed(r.seed, li, 0));
                    files.add(dir / ("circuits_" + cli::stem(spec)) /
                                  ("l" + std::to_string(r.cfg.lengths[li]) + "_s0.json"),
                              circuit_to_text(circ));
                }
            }
        }
        files.commit();
        out << table.str();
        return kExitOk;
    });
}

/// `dcrb sweep`: fitted error per block over a grid of one noise parameter,
/// next to the incoherent prediction. Writes sweep_<axis>.csv.
inline int cmd_sweep(const std::vector<std::string> &args, std::ostream &out = std::cout,
                     std::ostream &err = std::cerr) {
    CLI::App app{"Sweep one noise parameter", "dcrb sweep"};
    cli::RunArgs a;
    std::string axis;
    std::string grid;
    cli::add_run_options(app, a);
    app.add_option("--axis", axis, "eps_r (assignment error, all qubits), eps_2q (CNOT gate error) or zz (Hz)")
        ->required();
    app.add_option("--grid", grid, "Comma list of axis values, e.g. 0.005,0.01,...,0.05")->required();
    bool done;
    int code = cli::parse_app(app, args, out, err, done);
    if (done) {
        return code;
    }
    return cli::guarded(err, [&] {
        if (axis != "eps_r" && axis != "eps_2q" && axis != "zz") {
            throw ConfigError("--axis must be one of eps_r, eps_2q, zz");
        }
        auto values = cli::parse_number_list(grid);
        if (values.empty()) {
            throw ConfigError("--grid is empty");
        }
        auto base = cli::resolve(a);
        int jobs = cli::resolve_jobs(a.jobs);

        nlohmann::json config = cli::config_json(base, base.specs.front());
        config.erase("block");
        config.erase("dd");
        config["blocks"] = cli::split(a.blocks);
        config["dd_modes"] = cli::split(a.dd);
        config["axis"] = axis;
        config["grid"] = values;
        std::string csv = cli::provenance("sweep", config, base.seed);
        csv += "value,block,dd,qubit,alpha,alpha_err,epsilon_raw,epsilon,epsilon_err,predicted,status\n";
        std::ostringstream table;
        table << cli::pad("value", 12) << cli::pad("block", 8) << cli::pad("dd", 6) << cli::pad("qubit", 7)
              << cli::pad("epsilon", 13) << cli::pad("predicted", 13) << "status\n";

        for (double v : values) {
            cli::Resolved r = base;
            if (axis == "eps_r") {
                for (auto &ro : r.nm.readout) {
                    ro.p01 = v;
                    ro.p10 = v;
                }
            } else if (axis == "eps_2q") {
                r.nm.gates.depol_2q = 4 * v / 3;
            } else {
                for (int d : r.cfg.data_qubits) {
                    r.nm.coupling.set_zz(d, r.cfg.measured_qubit, v);
                }
            }
            try {
                r.nm.validate();
            } catch (const ParameterError &e) {
                throw ConfigError("grid value " + cli::fmt_short(v) + ": " + e.what());
            }
            for (const auto &spec : r.specs) {
                auto result = run_experiment(r.cfg, spec, r.nm, r.seed, jobs);
                for (const auto &curve : result.data) {
                    auto rec = cli::fit_record(curve, r, spec);
                    std::string eps = rec.interleaved ? cli::fmt(rec.interleaved->epsilon) : "";
                    std::string eps_err = rec.interleaved ? cli::fmt(rec.interleaved->err) : "";
                    csv += cli::fmt(v) + "," + std::string(to_string(spec.kind)) + "," +
                           std::string(to_string(spec.dd)) + "," + std::to_string(curve.qubit) + "," +
                           cli::fmt(rec.fit.alpha) + "," + cli::fmt(rec.fit.alpha_err) + "," +
                           cli::fmt(rec.fit.epsilon) + "," + eps + "," + eps_err + "," + cli::fmt(rec.predicted) +
                           "," + to_string(rec.fit.status) + "\n";
                    table << cli::pad(cli::fmt_short(v), 12) << cli::pad(std::string(to_string(spec.kind)), 8)
                          << cli::pad(std::string(to_string(spec.dd)), 6) << cli::pad(std::to_string(curve.qubit), 7)
                          << cli::pad(rec.interleaved ? cli::fmt_short(rec.interleaved->epsilon) : "-", 13)
                          << cli::pad(cli::fmt_short(rec.predicted), 13) << to_string(rec.fit.status) << "\n";
                }
            }
        }
        cli::OutputSet files;
        files.add(std::filesystem::path(a.out) / ("sweep_" + axis + ".csv"), csv);
        files.commit();
        out << table.str();
        return kExitOk;
    });
}

/// `dcrb oracle`: closed-form predictions for one block.
inline int cmd_oracle(const std::vector<std::string> &args, std::ostream &out = std::cout,
                      std::ostream &err = std::cerr) {
    CLI::App app{"Closed-form error predictions", "dcrb oracle"};
    std::string block;
    double eps_r = 0, eps_2q = 0, tau_ns = 0;
    std::string t1 = "inf", t2 = "inf";
    int depth = 0;
    app.add_option("--block", block, "h_cnot, z_c0, z_c1, i_c0, i_c1 or delay")->required();
    app.add_option("--eps-r", eps_r, "Symmetric assignment error")->capture_default_str();
    app.add_option("--eps-2q", eps_2q, "CNOT gate error")->capture_default_str();
    app.add_option("--t1-us", t1, "Data-qubit T1 in us, or inf")->capture_default_str();
    app.add_option("--t2-us", t2, "Data-qubit T2 in us, or inf")->capture_default_str();
    app.add_option("--tau-ns", tau_ns, "Idle time per block in ns")->capture_default_str();
    app.add_option("--depth", depth, "Print exact survival for depths 0..N")->capture_default_str();
    bool done;
    int code = cli::parse_app(app, args, out, err, done);
    if (done) {
        return code;
    }
    return cli::guarded(err, [&] {
        auto kind = parse_block_kind(block);
        auto time_us = [](const std::string &s) { return s == "inf" ? kInfinity : cli::parse_double(s) * 1e-6; };
        TheoryParams p{eps_r, eps_2q, time_us(t1), time_us(t2), tau_ns * 1e-9};
        try {
            p.validate();
        } catch (const ParameterError &e) {
            throw ConfigError(e.what());
        }
        if (depth < 0) {
            throw ConfigError("--depth must be non-negative");
        }
        out << "block: " << to_string(kind) << "\n";
        out << "epsilon_tau = " << cli::fmt_short(idle_error(p.t1, p.t2, p.tau)) << "\n";
        out << "epsilon = " << cli::fmt_short(predicted_error(kind, p)) << "\n";
        bool zc = kind == BlockKind::z_c0 || kind == BlockKind::z_c1;
        if (zc) {
            out << "alpha_leading = " << cli::fmt_short(alpha_zc_leading(eps_r)) << "\n";
            out << "alpha_asymptotic = " << cli::fmt_short(alpha_zc_exact(eps_r)) << "\n";
            out << "nonmarkovian_deviation = " << cli::fmt_short(check_nonmarkovian(eps_r).deviation) << "\n";
        } else if (kind == BlockKind::h_cnot) {
            out << "alpha = " << cli::fmt_short(1 - 4 * eps_r / 3) << "\n";
        }
        if (depth > 0) {
            if (!zc && kind != BlockKind::h_cnot) {
                out << "(assignment error does not act on the data qubit in this block; survival is 1)\n";
            }
            out << "depth,survival\n";
            for (int d = 0; d <= depth; ++d) {
                double s = zc ? survival_zc(eps_r, d) : kind == BlockKind::h_cnot ? survival_hcnot(eps_r, d) : 1.0;
                out << d << "," << cli::fmt(s) << "\n";
            }
        }
        return kExitOk;
    });
}

inline int cli_main(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    const std::string usage =
        "usage: dcrb <run|sweep|oracle> [options]\n"
        "  run     simulate interleaved RB for blocks and DD modes, fit, write results\n"
        "  sweep   fitted error over a grid of eps_r, eps_2q or zz\n"
        "  oracle  closed-form predictions\n"
        "use 'dcrb <command> --help' for options\n";
    if (argc < 2) {
        err << usage;
        return kExitUsage;
    }
    std::string cmd = argv[1];
    std::vector<std::string> rest(argv + 2, argv + argc);
    if (cmd == "run") {
        return cmd_run(rest, out, err);
    }
    if (cmd == "sweep") {
        return cmd_sweep(rest, out, err);
    }
    if (cmd == "oracle") {
        return cmd_oracle(rest, out, err);
    }
    if (cmd == "-h" || cmd == "--help" || cmd == "help") {
        out << usage;
        return kExitOk;
    }
    err << "unknown command '" << cmd << "'\n" << usage;
    return kExitUsage;
}

}  // namespace dcrb

#endif
