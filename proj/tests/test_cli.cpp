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

#include "dcrb/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

using namespace dcrb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::vector<const char *> argv{"dcrb"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("dcrb_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path &p, const std::string &text) {
    std::ofstream(p) << text;
}

const char *kZeroNoise =
    R"({"t1": "inf", "t2": "inf", "p01": 0, "p10": 0, "depol_1q": 0, "depol_2q": 0})";

std::vector<std::vector<std::string>> csv_rows(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        rows.push_back(cli::split(line));
    }
    return rows;
}

}  // namespace

TEST(parse_number_list, ranges_and_errors) {
    EXPECT_EQ(cli::parse_int_list("0,25,50,...,150"), (std::vector<int>{0, 25, 50, 75, 100, 125, 150}));
    EXPECT_EQ(cli::parse_int_list(" 1, 2 ,3"), (std::vector<int>{1, 2, 3}));
    auto d = cli::parse_number_list("0.005,0.01,...,0.025");
    ASSERT_EQ(d.size(), 5u);
    EXPECT_NEAR(d.back(), 0.025, 1e-15);
    EXPECT_THROW(cli::parse_number_list("1,abc"), ConfigError);
    EXPECT_THROW(cli::parse_int_list("1.5"), ConfigError);
}

TEST(cli_main, usage) {
    EXPECT_EQ(call({}).code, kExitUsage);
    EXPECT_EQ(call({"frobnicate"}).code, kExitUsage);
    auto h = call({"--help"});
    EXPECT_EQ(h.code, kExitOk);
    EXPECT_NE(h.out.find("oracle"), std::string::npos);
    EXPECT_EQ(call({"run", "--help"}).code, kExitOk);
    EXPECT_EQ(call({"run", "--no-such-flag"}).code, kExitUsage);
}

TEST(run, writes_curve_and_fit) {
    auto dir = fresh_dir("run");
    write(dir / "nm.json", R"({"p01": 0.02, "p10": 0.02})");
    auto r = call({"run", "--block", "z_c0", "--lengths", "0,25,50,...,300", "--k", "5", "--seeds", "4", "--shots",
                   "50", "--noise", (dir / "nm.json").string(), "--seed", "7", "--out", (dir / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string csv = slurp(dir / "o" / "curve_z_c0_none.csv");
    EXPECT_EQ(csv.rfind("# dcrb run\n# config: {", 0), 0u);
    EXPECT_NE(csv.find("# seed: 7\n"), std::string::npos);
    auto rows = csv_rows(csv);
    ASSERT_EQ(rows.size(), 1u + 13u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"n_blocks", "qubit", "mean", "stderr"}));
    EXPECT_EQ(rows[1][0], "0");
    EXPECT_EQ(rows[13][0], "60");
    auto fit = nlohmann::json::parse(slurp(dir / "o" / "fit_z_c0_none.json"));
    EXPECT_EQ(fit["seed"], 7);
    ASSERT_EQ(fit["fits"].size(), 1u);
    EXPECT_TRUE(fit["fits"][0].contains("alpha"));
    EXPECT_EQ(fit["config"]["seeds"], 4);
    EXPECT_TRUE(fs::exists(dir / "o" / "measured_z_c0_none.csv"));
    EXPECT_NE(r.out.find("z_c0"), std::string::npos);
}

TEST(run, zero_noise_delay_is_degenerate) {
    auto dir = fresh_dir("delay");
    write(dir / "zero.json", kZeroNoise);
    auto r = call({"run", "--block", "delay", "--lengths", "0,10,20,30", "--seeds", "2", "--shots", "20", "--noise",
                   (dir / "zero.json").string(), "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(slurp(dir / "curve_delay_none.csv"));
    for (size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][2], "1");
    }
    auto fit = nlohmann::json::parse(slurp(dir / "fit_delay_none.json"));
    EXPECT_EQ(fit["fits"][0]["status"], "unidentifiable");
    EXPECT_TRUE(fit["fits"][0]["epsilon_interleaved"].is_null());
}

TEST(run, deterministic_across_runs_and_jobs) {
    auto dir = fresh_dir("det");
    std::vector<std::string> base{"run", "--block", "h_cnot,z_c1", "--dd", "none,ffdd", "--lengths", "0,10,20,40",
                                  "--seeds", "3", "--shots", "30", "--seed", "11"};
    auto with = [&](const std::string &out, const std::string &jobs) {
        auto args = base;
        args.insert(args.end(), {"--out", (dir / out).string(), "--jobs", jobs});
        return call(args);
    };
    ASSERT_EQ(with("a", "1").code, 0);
    ASSERT_EQ(with("b", "1").code, 0);
    ASSERT_EQ(with("c", "4").code, 0);
    size_t n = 0;
    for (const auto &e : fs::directory_iterator(dir / "a")) {
        auto name = e.path().filename();
        EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / name)) << name;
        EXPECT_EQ(slurp(e.path()), slurp(dir / "c" / name)) << name;
        ++n;
    }
    EXPECT_EQ(n, 12u);
}

TEST(run, seed_from_environment) {
    auto dir = fresh_dir("env");
    std::vector<std::string> base{"run", "--lengths", "0,10,20,30", "--seeds", "2", "--shots", "20"};
    auto a = base;
    a.insert(a.end(), {"--seed", "123", "--out", (dir / "a").string()});
    ASSERT_EQ(call(a).code, 0);
    ::setenv("DCRB_SEED", "123", 1);
    auto b = base;
    b.insert(b.end(), {"--out", (dir / "b").string()});
    auto rb = call(b);
    ::unsetenv("DCRB_SEED");
    ASSERT_EQ(rb.code, 0);
    EXPECT_EQ(slurp(dir / "a" / "curve_z_c0_none.csv"), slurp(dir / "b" / "curve_z_c0_none.csv"));
}

TEST(run, dump_circuits) {
    auto dir = fresh_dir("dump");
    auto r = call({"run", "--lengths", "0,5,10,15", "--seeds", "1", "--shots", "5", "--dump-circuits", "--out",
                   dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto text = slurp(dir / "circuits_z_c0_none" / "l10_s0.json");
    Circuit c = circuit_from_text(text);
    EXPECT_EQ(c.measurement_count(), 2u + 2u);
}

TEST(run, bad_config_writes_nothing) {
    auto dir = fresh_dir("bad");
    write(dir / "bad.json", R"({"t1": 10, "t2": 50})");
    auto r = call({"run", "--noise", (dir / "bad.json").string(), "--out", (dir / "o").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("error"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "o"));

    EXPECT_EQ(call({"run", "--lengths", "0,7", "--out", (dir / "o").string()}).code, kExitUsage);
    EXPECT_EQ(call({"run", "--block", "h_cnot", "--disconnected", "--out", (dir / "o").string()}).code,
              kExitUsage);
    EXPECT_EQ(call({"run", "--noise", (dir / "missing.json").string()}).code, kExitUsage);
    EXPECT_FALSE(fs::exists(dir / "o"));
}

TEST(run, late_failure_writes_nothing) {
    // The first (block, dd) pair succeeds; FFDD then fails because
    // tau_ff exceeds tau_meas. Nothing may be left behind.
    auto dir = fresh_dir("late");
    write(dir / "nm.json", R"({"tau_ff_ns": 2000})");
    auto r = call({"run", "--dd", "none,ffdd", "--lengths", "0,5,10,15", "--seeds", "1", "--shots", "5", "--noise",
                   (dir / "nm.json").string(), "--out", (dir / "o").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_FALSE(fs::exists(dir / "o"));
}

TEST(sweep, empty_grid_is_usage_error) {
    auto dir = fresh_dir("sweep_empty");
    EXPECT_EQ(call({"sweep", "--axis", "eps_r", "--grid", "", "--out", dir.string()}).code, kExitUsage);
    EXPECT_EQ(call({"sweep", "--axis", "eps_r", "--out", dir.string()}).code, kExitUsage);
    EXPECT_EQ(call({"sweep", "--axis", "t1", "--grid", "1", "--out", dir.string()}).code, kExitUsage);
    EXPECT_EQ(call({"sweep", "--axis", "eps_r", "--grid", "1.5", "--out", dir.string()}).code, kExitUsage);
    EXPECT_TRUE(fs::is_empty(dir));
}

TEST(sweep, eps_r_tracks_combined_prediction) {
    auto dir = fresh_dir("sweep_eps");
    write(dir / "nm.json",
          R"({"t1": 250, "t2": 250, "depol_1q": 0, "depol_2q": 0, "tau_meas_ns": 1200, "tau_ff_ns": 800})");
    auto r = call({"sweep", "--axis", "eps_r", "--grid", "0.01,0.04", "--block", "z_c0", "--noise",
                   (dir / "nm.json").string(), "--seed", "3", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(slurp(dir / "sweep_eps_r.csv"));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0][7], "epsilon");
    double eps_tau = 2.0 / 3 * (0.75 - 0.75 * std::exp(-2.0 / 250));
    for (size_t i = 1; i < rows.size(); ++i) {
        double v = std::stod(rows[i][0]);
        double predicted = 1 - (1 - 4 * v / 9) * (1 - eps_tau);
        EXPECT_NEAR(std::stod(rows[i][9]), predicted, 1e-12);
        EXPECT_NEAR(std::stod(rows[i][7]), predicted, 0.15 * predicted);
        EXPECT_EQ(rows[i][10], "ok");
    }
}

TEST(oracle, examples) {
    auto h = call({"oracle", "--block", "h_cnot", "--eps-r", "0.03"});
    ASSERT_EQ(h.code, 0);
    EXPECT_NE(h.out.find("\nepsilon = 0.02\n"), std::string::npos) << h.out;
    auto z = call({"oracle", "--block", "z_c0", "--eps-r", "0"});
    ASSERT_EQ(z.code, 0);
    EXPECT_NE(z.out.find("\nepsilon = 0\n"), std::string::npos) << z.out;
    EXPECT_EQ(call({"oracle", "--block", "z_c0", "--eps-r", "2"}).code, kExitUsage);
    EXPECT_EQ(call({"oracle"}).code, kExitUsage);
}

TEST(oracle, survival_table_matches_engine) {
    auto r = call({"oracle", "--block", "z_c0", "--eps-r", "0.02", "--depth", "10"});
    ASSERT_EQ(r.code, 0);
    auto pos = r.out.find("depth,survival\n");
    ASSERT_NE(pos, std::string::npos);
    auto rows = csv_rows(r.out.substr(pos));
    ASSERT_EQ(rows.size(), 12u);
    NoiseModel nm = NoiseModel::ideal(2);
    nm.readout[1] = ReadoutError::symmetric(0.02);
    std::vector<int> depths;
    for (int d = 0; d <= 10; ++d) {
        depths.push_back(d);
    }
    auto exact = exact_survival({BlockKind::z_c0, DdMode::none, true}, nm, 5, depths);
    for (int d = 0; d <= 10; ++d) {
        EXPECT_EQ(std::stoi(rows[d + 1][0]), d);
        EXPECT_NEAR(std::stod(rows[d + 1][1]), exact[d], 1e-12);
    }
}
