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

#include "dcrb/analysis.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dcrb/oracle.h"

using namespace dcrb;

namespace {

DecayCurve synthetic(double a, double b, double alpha, const std::vector<double> &ns, double se = 1e-4) {
    DecayCurve c;
    c.seeds = 20;
    c.shots = 300;
    for (double n : ns) {
        c.block_counts.push_back(n);
        c.means.push_back(a * std::pow(alpha, n) + b);
        c.stderrs.push_back(se);
    }
    return c;
}

std::vector<double> grid(int lo, int hi, int step) {
    std::vector<double> out;
    for (int n = lo; n <= hi; n += step) {
        out.push_back(n);
    }
    return out;
}

}  // namespace

TEST(fit_exponential, noiseless_round_trip) {
    auto fit = fit_exponential(synthetic(0.5, 0.5, 0.99, grid(0, 60, 5)));
    ASSERT_TRUE(fit.converged());
    EXPECT_LE(std::abs(fit.alpha - 0.99), 1e-6);
    EXPECT_NEAR(fit.A, 0.5, 1e-5);
    EXPECT_NEAR(fit.B, 0.5, 1e-5);
    EXPECT_LE(fit.max_abs_residual, 1e-10);
    EXPECT_NEAR(fit.epsilon, 0.005, 1e-6);
}

TEST(fit_exponential, round_trip_over_parameters) {
    for (double alpha : {0.9, 0.95, 0.98, 0.995}) {
        for (double a : {0.3, 0.5, 0.7}) {
            double b = 1 - a > 0.5 ? 0.5 : 1 - a;
            auto fit = fit_exponential(synthetic(a, b, alpha, {0, 1, 2, 5, 10, 20, 30, 40, 60}));
            ASSERT_TRUE(fit.converged());
            EXPECT_LE(std::abs(fit.alpha - alpha), 1e-6) << alpha << " " << a;
        }
    }
}

TEST(fit_exponential, flat_data_is_unidentifiable) {
    DecayCurve c = synthetic(0, 1, 0.9, grid(0, 60, 10));
    auto fit = fit_exponential(c);
    EXPECT_EQ(fit.status, FitStatus::unidentifiable);
    EXPECT_FALSE(fit.converged());
    EXPECT_THROW(extract_epsilon(fit), FitError);
}

TEST(fit_exponential, needs_four_depths) {
    EXPECT_THROW(fit_exponential(synthetic(0.5, 0.5, 0.9, {0, 10, 20})), ParameterError);
    EXPECT_THROW(fit_exponential(synthetic(0.5, 0.5, 0.9, {0, 0, 10, 10, 20, 20})), ParameterError);
    FitOptions o;
    o.skip_depths = 1;
    EXPECT_THROW(fit_exponential(synthetic(0.5, 0.5, 0.9, {0, 10, 20, 30}), o), ParameterError);
}

TEST(fit_exponential, rejects_malformed_curve) {
    DecayCurve c = synthetic(0.5, 0.5, 0.9, grid(0, 40, 10));
    c.means.pop_back();
    EXPECT_THROW(fit_exponential(c), DimensionError);
}

TEST(fit_exponential, unsorted_input) {
    auto c = synthetic(0.5, 0.5, 0.97, {40, 0, 20, 10, 60, 5});
    auto fit = fit_exponential(c);
    ASSERT_TRUE(fit.converged());
    EXPECT_LE(std::abs(fit.alpha - 0.97), 1e-6);
}

TEST(fit_exponential, fixed_b) {
    FitOptions o;
    o.fixed_b = 0.5;
    auto fit = fit_exponential(synthetic(0.45, 0.5, 0.96, grid(0, 60, 5)), o);
    ASSERT_TRUE(fit.converged());
    EXPECT_EQ(fit.B, 0.5);
    EXPECT_EQ(fit.B_err, 0.0);
    EXPECT_LE(std::abs(fit.alpha - 0.96), 1e-6);
    o.fixed_b = 1.5;
    EXPECT_THROW(fit_exponential(synthetic(0.45, 0.5, 0.96, grid(0, 60, 5)), o), ParameterError);
}

TEST(fit_exponential, skip_depths_drops_short_sequences) {
    // Corrupt the first point; skipping it restores the exact answer.
    DecayCurve c = synthetic(0.5, 0.5, 0.97, grid(0, 60, 5));
    c.means[0] = 0.9;
    FitOptions o;
    o.skip_depths = 1;
    auto fit = fit_exponential(c, o);
    ASSERT_TRUE(fit.converged());
    EXPECT_LE(std::abs(fit.alpha - 0.97), 1e-6);
    EXPECT_GT(std::abs(fit_exponential(c).alpha - 0.97), 1e-4);
}

TEST(fit_exponential, error_scales_with_stderr) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0, 2e-3);
    DecayCurve c = synthetic(0.5, 0.5, 0.98, grid(0, 60, 5), 2e-3);
    for (auto &m : c.means) {
        m += g(rng);
    }
    auto f1 = fit_exponential(c);
    DecayCurve c2 = c;
    for (auto &s : c2.stderrs) {
        s *= 2;
    }
    auto f2 = fit_exponential(c2);
    ASSERT_TRUE(f1.converged() && f2.converged());
    EXPECT_NEAR(f1.alpha, f2.alpha, 1e-9);
    EXPECT_NEAR(f2.alpha_err / f1.alpha_err, 2.0, 1e-6);
}

TEST(fit_exponential, faster_decay_gives_smaller_alpha) {
    double prev = 1;
    for (double alpha : {0.995, 0.99, 0.98, 0.96, 0.93}) {
        auto fit = fit_exponential(synthetic(0.5, 0.5, alpha, grid(0, 60, 5)));
        EXPECT_LT(fit.alpha, prev);
        prev = fit.alpha;
    }
}

TEST(fit_exponential, hcnot_closed_form_curve) {
    DecayCurve c;
    for (int d : {0, 5, 10, 20, 30, 40, 60}) {
        c.block_counts.push_back(d);
        c.means.push_back(survival_hcnot(0.02, d));
        c.stderrs.push_back(1e-3);
    }
    auto fit = fit_exponential(c);
    ASSERT_TRUE(fit.converged());
    EXPECT_NEAR(fit.alpha, 1 - 4 * 0.02 / 3, 1e-4);
    EXPECT_LE(fit.max_abs_residual, 1e-12);
}

TEST(fit_exponential, binomial_coverage) {
    std::mt19937_64 rng(2026);
    const std::vector<double> ns{0, 5, 10, 20, 30, 40, 60};
    const int shots = 6000;
    const int trials = 1000;
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        DecayCurve c;
        c.seeds = 20;
        c.shots = 300;
        for (double n : ns) {
            double p = 0.5 * std::pow(0.98, n) + 0.5;
            std::binomial_distribution<int> b(shots, p);
            double f = static_cast<double>(b(rng)) / shots;
            c.block_counts.push_back(n);
            c.means.push_back(f);
            c.stderrs.push_back(std::sqrt(std::max(f * (1 - f), 1e-12) / shots));
        }
        auto fit = fit_exponential(c);
        if (fit.converged() && std::abs(fit.alpha - 0.98) <= 3 * fit.alpha_err) {
            ++covered;
        }
    }
    EXPECT_GE(covered, 990);
}

TEST(extract_epsilon, examples) {
    FitResult f;
    f.status = FitStatus::ok;
    f.alpha = 1;
    EXPECT_EQ(extract_epsilon(f).epsilon, 0.0);
    f.alpha = 0.98222;
    f.alpha_err = 2e-4;
    auto e = extract_epsilon(f);
    EXPECT_NEAR(e.epsilon, 8.89e-3, 1e-15);
    EXPECT_NEAR(e.err, 1e-4, 1e-15);
    EXPECT_FALSE(e.interleaved);
    f.alpha = 0.97;
    auto i = extract_epsilon(f, 0.99, 1e-4);
    EXPECT_TRUE(i.interleaved);
    EXPECT_NEAR(i.epsilon, (1 - 0.97 / 0.99) / 2, 1e-15);
    EXPECT_NEAR(i.epsilon, 1.0101e-2, 1e-6);
    double expected_err = std::hypot(2e-4 / (2 * 0.99), 0.97 / 0.99 / (2 * 0.99) * 1e-4);
    EXPECT_NEAR(i.err, expected_err, 1e-15);
    EXPECT_THROW(extract_epsilon(f, 0.0), ParameterError);
    f.status = FitStatus::not_converged;
    EXPECT_THROW(extract_epsilon(f), FitError);
}
