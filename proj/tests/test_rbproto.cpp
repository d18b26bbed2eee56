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

#include "dcrb/rbproto.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dcrb/engine.h"
#include "test_util.h"

using namespace dcrb;
using dcrb::testing::max_abs;

namespace {

const CliffordTable &table() {
    return CliffordTable::instance();
}

bool proportional_to_identity(const Matrix &u, double tol) {
    cplx phase = u(0, 0);
    return std::abs(std::abs(phase) - 1) < tol && max_abs(u - phase * Matrix::Identity(2, 2)) < tol;
}

// Block on (data 0, measured 1) with the data qubit in rho and the measured qubit in |0>.
Matrix run_block(const BlockSpec &spec, const NoiseModel &nm, const Matrix &rho_data) {
    Superoperator s = block_channel(spec, nm);
    Matrix in = kron(DensityMatrix::ground(1).matrix(), rho_data);
    return s.apply(in);
}

std::vector<BlockSpec> all_specs() {
    std::vector<BlockSpec> out;
    for (BlockKind k : kAllBlockKinds) {
        for (DdMode d : kAllDdModes) {
            out.push_back({k, d, true});
        }
    }
    return out;
}

}  // namespace

TEST(clifford_table, has_24_distinct_unitaries) {
    for (int a = 0; a < 24; ++a) {
        EXPECT_TRUE(is_unitary(table().unitary(a)));
        for (int b = a + 1; b < 24; ++b) {
            // Distinct up to global phase: |tr(U_a^dag U_b)| < 2.
            EXPECT_LT(std::abs((table().unitary(a).adjoint() * table().unitary(b)).trace()), 2 - 1e-9);
        }
    }
}

TEST(clifford_table, closed_under_composition) {
    for (int a = 0; a < 24; ++a) {
        for (int b = 0; b < 24; ++b) {
            Matrix prod = table().unitary(b) * table().unitary(a);
            int c = table().compose(a, b);
            EXPECT_TRUE(proportional_to_identity(table().unitary(c).adjoint() * prod, 1e-10));
        }
    }
}

TEST(clifford_table, hh_is_identity) {
    int h = table().find(gates::h());
    ASSERT_GE(h, 0);
    int id = table().find(gates::identity());
    EXPECT_EQ(table().compose(h, h), id);
}

TEST(clifford_table, s_inverse) {
    int s = table().find(gates::s());
    ASSERT_GE(s, 0);
    EXPECT_EQ(table().compose(table().inverse(s), s), table().find(gates::identity()));
    EXPECT_EQ(table().find(gates::rz(0.3)), -1);
}

TEST(clifford_table, random_sequence_with_inverse) {
    Rng rng(11);
    std::vector<int> seq;
    Matrix prod = Matrix::Identity(2, 2);
    for (int i = 0; i < 100; ++i) {
        int c = static_cast<int>(uniform_index(rng, 24));
        seq.push_back(c);
        prod = table().unitary(c) * prod;
    }
    prod = table().unitary(table().inverse_of_sequence(seq)) * prod;
    EXPECT_TRUE(proportional_to_identity(prod, 1e-10));
}

TEST(parse, names_round_trip) {
    for (BlockKind k : kAllBlockKinds) {
        EXPECT_EQ(parse_block_kind(to_string(k)), k);
    }
    for (DdMode d : kAllDdModes) {
        EXPECT_EQ(parse_dd_mode(to_string(d)), d);
    }
    EXPECT_THROW(parse_block_kind("x_c0"), ConfigError);
    EXPECT_THROW(parse_dd_mode("xy4"), ConfigError);
}

TEST(build_block, h_cnot_needs_connectivity) {
    BlockSpec spec{BlockKind::h_cnot, DdMode::none, false};
    EXPECT_THROW(build_block(spec, Timing{}, BlockLayout{}), ConfigError);
    spec.kind = BlockKind::z_c0;
    EXPECT_NO_THROW(build_block(spec, Timing{}, BlockLayout{}));
}

TEST(build_block, noiseless_identity_on_random_states) {
    Rng rng(21);
    NoiseModel nm = NoiseModel::ideal(2);
    for (const auto &spec : all_specs()) {
        for (int trial = 0; trial < 6; ++trial) {
            Vector psi = dcrb::testing::random_complex(2, 1, rng).col(0);
            psi.normalize();
            Matrix rho = psi * psi.adjoint();
            Matrix out = run_block(spec, nm, rho);
            int data[] = {0};
            int meas[] = {1};
            Matrix data_out = partial_trace_raw(out, data, 2);
            double fidelity = (psi.adjoint() * data_out * psi)(0, 0).real();
            EXPECT_NEAR(fidelity, 1.0, 1e-10) << to_string(spec.kind) << "/" << to_string(spec.dd);
            Matrix m_out = partial_trace_raw(out, meas, 2);
            EXPECT_NEAR(m_out(0, 0).real(), 1.0, 1e-10);
        }
    }
}

TEST(build_block, delay_lasts_measurement_plus_feedforward) {
    Timing t;
    for (DdMode d : kAllDdModes) {
        Circuit c = build_block({BlockKind::delay, d, true}, t, BlockLayout{});
        EXPECT_NEAR(total_duration(c, t), t.tau_meas + t.tau_ff, 1e-18);
    }
}

TEST(build_block, dd_keeps_block_duration) {
    Timing t;
    for (BlockKind k : kAllBlockKinds) {
        double base = total_duration(build_block({k, DdMode::none, true}, t, BlockLayout{}), t);
        for (DdMode d : {DdMode::mdd, DdMode::ffdd}) {
            EXPECT_NEAR(total_duration(build_block({k, d, true}, t, BlockLayout{}), t), base, 1e-18);
        }
    }
}

TEST(build_block, z_c1_reports_one_and_resets) {
    NoiseModel nm = NoiseModel::ideal(2);
    Circuit c = build_block({BlockKind::z_c1, DdMode::none, true}, nm.timing, BlockLayout{{0}, 1, 2, 2, 0});
    c.append(Measure{1, 1, {}});
    auto dist = enumerate_branches(c, nm);
    EXPECT_NEAR(dist.probability_zero(0), 0.0, 1e-15);
    EXPECT_NEAR(dist.probability_zero(1), 1.0, 1e-15);
}

TEST(build_block, h_cnot_bit_is_fair) {
    NoiseModel nm = NoiseModel::ideal(2);
    Circuit c = build_block({BlockKind::h_cnot, DdMode::none, true}, nm.timing, BlockLayout{});
    auto cc = compile(c, nm);
    Rng rng(31);
    const int n = 10000;
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
        zeros += run_shot(cc, rng)[0] == 0;
    }
    EXPECT_NEAR(static_cast<double>(zeros) / n, 0.5, 4 * std::sqrt(0.25 / n));
}

TEST(apply_dd, ffdd_needs_long_readout) {
    Timing t;
    t.tau_ff = t.tau_meas;
    EXPECT_THROW(build_block({BlockKind::z_c0, DdMode::ffdd, true}, t, BlockLayout{}), ConfigError);
    EXPECT_NO_THROW(build_block({BlockKind::z_c0, DdMode::mdd, true}, t, BlockLayout{}));
}

TEST(apply_dd, needs_a_window) {
    Circuit c(2, 0);
    c.append(Idle{1e-6, {0, 1}, IdleRole::plain});
    int data[] = {0};
    EXPECT_THROW(apply_dd(c, DdMode::mdd, Timing{}, data), ConfigError);
    EXPECT_TRUE(apply_dd(c, DdMode::none, Timing{}, data) == c);
}

TEST(apply_dd, schedule_shape) {
    Timing t;
    Circuit c = build_block({BlockKind::delay, DdMode::ffdd, true}, t, BlockLayout{});
    // [h/4, X, h/2, X, h/4, tau_ff, X, tau_ff (ff), X]
    const auto &in = c.instructions();
    ASSERT_EQ(in.size(), 9u);
    double head = t.tau_meas - t.tau_ff;
    EXPECT_NEAR(std::get<Idle>(in[0]).duration, head / 4, 1e-20);
    EXPECT_EQ(std::get<Gate>(in[1]).name, "x_dd");
    EXPECT_NEAR(std::get<Idle>(in[2]).duration, head / 2, 1e-20);
    EXPECT_NEAR(std::get<Idle>(in[5]).duration, t.tau_ff, 1e-20);
    EXPECT_EQ(std::get<Idle>(in[7]).role, IdleRole::feedforward);
    EXPECT_EQ(std::get<Gate>(in[8]).name, "x_dd");
}

namespace {

// Data coherence <0|rho|1> after the block, from |+> on the data qubit.
cplx coherence_after(BlockKind kind, DdMode dd, double delta, double zeta) {
    NoiseModel nm = NoiseModel::ideal(2);
    nm.coupling.detuning_hz[0] = delta;
    nm.coupling.set_zz(0, 1, zeta);
    Matrix plus = Matrix::Constant(2, 2, 0.5);
    int data[] = {0};
    Matrix out = partial_trace_raw(run_block({kind, dd, true}, nm, plus), data, 2);
    return out(0, 1);
}

}  // namespace

TEST(apply_dd, ffdd_cancels_static_phase) {
    // I_c1 holds the measured qubit in |1> through both windows; I_c0 in |0>.
    for (BlockKind k : {BlockKind::i_c0, BlockKind::i_c1, BlockKind::z_c0, BlockKind::z_c1}) {
        cplx c = coherence_after(k, DdMode::ffdd, 10e3, -50e3);
        EXPECT_NEAR(std::abs(c - cplx(0.5)), 0, 1e-10) << to_string(k);
    }
}

TEST(apply_dd, mdd_leaves_feedforward_phase) {
    Timing t;
    double delta = 10e3, zeta = -50e3;
    for (auto [k, m] : {std::pair{BlockKind::i_c0, 0}, std::pair{BlockKind::i_c1, 1}}) {
        cplx c = coherence_after(k, DdMode::mdd, delta, zeta);
        double phi = 2 * std::numbers::pi * (delta + 2 * zeta * m) * t.tau_ff;
        // A diag(1, exp(-i phi)) evolution multiplies <0|rho|1> by exp(+i phi).
        EXPECT_NEAR(std::abs(c - 0.5 * std::polar(1.0, phi)), 0, 1e-10) << to_string(k);
    }
}

TEST(apply_dd, no_dd_accumulates_full_window_phase) {
    Timing t;
    double delta = 10e3;
    cplx c = coherence_after(BlockKind::delay, DdMode::none, delta, 0);
    double phi = 2 * std::numbers::pi * delta * (t.tau_meas + t.tau_ff);
    EXPECT_NEAR(std::abs(c - 0.5 * std::polar(1.0, phi)), 0, 1e-10);
}

TEST(build_sequence, rejects_bad_length) {
    RBConfig cfg;
    EXPECT_THROW(build_sequence(cfg, BlockSpec{}, Timing{}, 7, 1), ConfigError);
    cfg.lengths = {0, 3};
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(build_sequence, zero_length_is_inverse_and_measurements) {
    RBConfig cfg;
    Circuit c = build_sequence(cfg, BlockSpec{}, Timing{}, 0, 5);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(std::get<Gate>(c.instructions()[0]).name, CliffordTable::gate_name(0));
    auto dist = enumerate_branches(c, NoiseModel::ideal(2));
    EXPECT_NEAR(dist.probability_zero(terminal_clbit(c, cfg, 0)), 1.0, 1e-15);
}

TEST(build_sequence, three_cliffords_one_block_each) {
    RBConfig cfg;
    cfg.k = 1;
    cfg.lengths = {3};
    BlockSpec spec{BlockKind::z_c0, DdMode::none, true};
    Timing t;
    Circuit c = build_sequence(cfg, spec, t, 3, 17);
    EXPECT_EQ(c.n_clbits(), 3 + 1 + 1);
    EXPECT_EQ(c.measurement_count(), 5u);
    // Expected layout: C F C F C F C_inv M M.
    Circuit block = build_block(spec, t, BlockLayout{});
    size_t bs = block.size();
    const auto &in = c.instructions();
    ASSERT_EQ(in.size(), 3 * (1 + bs) + 1 + 2);
    for (int j = 0; j < 3; ++j) {
        size_t at = static_cast<size_t>(j) * (1 + bs);
        EXPECT_EQ(std::get<Gate>(in[at]).name.front(), 'c');
        EXPECT_EQ(std::get<Measure>(in[at + 1]).clbit, j);
    }
    EXPECT_EQ(std::get<Gate>(in[3 * (1 + bs)]).name.front(), 'c');
    EXPECT_NO_THROW(c.validate());
    auto dist = enumerate_branches(c, NoiseModel::ideal(2));
    EXPECT_NEAR(dist.probability_zero(terminal_clbit(c, cfg, 0)), 1.0, 1e-12);
}

TEST(build_sequence, deterministic_in_seed) {
    RBConfig cfg;
    BlockSpec spec{BlockKind::h_cnot, DdMode::mdd, true};
    Circuit a = build_sequence(cfg, spec, Timing{}, 50, 1234);
    Circuit b = build_sequence(cfg, spec, Timing{}, 50, 1234);
    Circuit c = build_sequence(cfg, spec, Timing{}, 50, 1235);
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == c);
}

TEST(build_sequence, inverse_restores_each_data_qubit) {
    RBConfig cfg;
    cfg.data_qubits = {0, 2};
    cfg.measured_qubit = 1;
    Circuit c = build_reference_sequence(cfg, Timing{}, 40, 9);
    for (int q : cfg.data_qubits) {
        Matrix u = Matrix::Identity(2, 2);
        for (const auto &inst : c.instructions()) {
            if (const auto *g = std::get_if<Gate>(&inst); g && g->targets[0] == q) {
                u = g->matrix * u;
            }
        }
        EXPECT_TRUE(proportional_to_identity(u, 1e-10));
    }
}

TEST(build_sequence, data_streams_are_uncorrelated) {
    RBConfig cfg;
    cfg.data_qubits = {0, 2};
    cfg.k = 1;
    const int l = 6000;
    Circuit c = build_reference_sequence(cfg, Timing{}, l, 77);
    std::vector<std::string> s0, s2;
    for (const auto &inst : c.instructions()) {
        if (const auto *g = std::get_if<Gate>(&inst)) {
            (g->targets[0] == 0 ? s0 : s2).push_back(g->name);
        }
    }
    ASSERT_EQ(s0.size(), s2.size());
    int same = 0;
    for (size_t i = 0; i < s0.size(); ++i) {
        same += s0[i] == s2[i];
    }
    double p = 1.0 / 24;
    double n = static_cast<double>(s0.size());
    EXPECT_NEAR(same / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(build_sequence, noiseless_survival_for_every_block) {
    RBConfig cfg;
    cfg.k = 2;
    cfg.lengths = {8};
    NoiseModel nm = NoiseModel::ideal(2);
    for (const auto &spec : all_specs()) {
        Circuit c = build_sequence(cfg, spec, nm.timing, 8, 3);
        auto dist = enumerate_branches(c, nm);
        EXPECT_NEAR(dist.probability_zero(terminal_clbit(c, cfg, 0)), 1.0, 1e-12);
        EXPECT_NEAR(dist.total(), 1.0, 1e-12);
    }
}
