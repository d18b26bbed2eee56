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

#ifndef DCRB_ANALYSIS_H
#define DCRB_ANALYSIS_H

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcrb/decay_curve.h"
#include "dcrb/error.h"

namespace dcrb {

enum class FitStatus { ok, not_converged, unidentifiable };

inline const char *to_string(FitStatus s) {
    switch (s) {
        case FitStatus::ok:
            return "ok";
        case FitStatus::not_converged:
            return "not_converged";
        case FitStatus::unidentifiable:
            return "unidentifiable";
    }
    return "?";
}

struct FitOptions {
    /// Hold B at this value instead of fitting it.
    std::optional<double> fixed_b;
    /// Drop this many of the smallest block counts before fitting.
    int skip_depths = 0;
    int max_iterations = 1000;
};

/// P(n) = A alpha^n + B.
struct FitResult {
    double A = 0;
    double B = 0;
    double alpha = 0;
    double A_err = 0;
    double B_err = 0;
    double alpha_err = 0;
    double epsilon = 0;
    double epsilon_err = 0;
    FitStatus status = FitStatus::not_converged;
    /// sqrt(sum of squared weighted residuals).
    double residual_norm = 0;
    /// Largest unweighted |P(n) - model(n)| over the fitted points.
    double max_abs_residual = 0;
    int iterations = 0;

    bool converged() const {
        return status == FitStatus::ok;
    }
    double model(double n) const {
        return A * std::pow(alpha, n) + B;
    }
};

namespace detail {

struct FitProblem {
    std::vector<double> n;
    std::vector<double> y;
    std::vector<double> w;  // 1/sigma
    std::optional<double> fixed_b;
};

inline double fit_cost(const FitProblem &p, const std::array<double, 3> &th) {
    double c = 0;
    for (size_t i = 0; i < p.n.size(); ++i) {
        double r = (p.y[i] - (th[0] * std::pow(th[2], p.n[i]) + th[1])) * p.w[i];
        c += r * r;
    }
    return c;
}

/// Weighted Jacobian (rows: points; cols: A, B, alpha) and residuals.
inline void fit_linearize(const FitProblem &p, const std::array<double, 3> &th, Eigen::MatrixXd &j,
                          Eigen::VectorXd &r) {
    size_t m = p.n.size();
    j.resize(static_cast<Eigen::Index>(m), 3);
    r.resize(static_cast<Eigen::Index>(m));
    for (size_t i = 0; i < m; ++i) {
        auto ii = static_cast<Eigen::Index>(i);
        double n = p.n[i];
        double an = std::pow(th[2], n);
        double dalpha = n == 0 ? 0.0 : th[0] * n * std::pow(th[2], n - 1);
        j(ii, 0) = an * p.w[i];
        j(ii, 1) = p.fixed_b ? 0.0 : p.w[i];
        j(ii, 2) = dalpha * p.w[i];
        r(ii) = (p.y[i] - (th[0] * an + th[1])) * p.w[i];
    }
}

inline std::array<double, 3> clamp_params(std::array<double, 3> th) {
    for (double &v : th) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return th;
}

}  // namespace detail

/// Weighted, box-bounded Levenberg-Marquardt fit of A alpha^n + B with
/// A, B, alpha in [0, 1]. Weights are 1/stderr^2 with stderr floored at
/// 1/(2 * total shots). Uncertainties come from (J^T W J)^-1 at the optimum.
inline FitResult fit_exponential(const DecayCurve &curve, const FitOptions &opts = {}) {
    curve.validate();
    if (opts.skip_depths < 0) {
        throw ParameterError("skip_depths must be non-negative");
    }
    if (opts.fixed_b && !(*opts.fixed_b >= 0 && *opts.fixed_b <= 1)) {
        throw ParameterError("fixed B must lie in [0, 1]");
    }

    std::vector<size_t> order(curve.size());
    for (size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return curve.block_counts[a] < curve.block_counts[b]; });

    double floor = curve.total_shots() > 0 ? 1.0 / (2.0 * static_cast<double>(curve.total_shots())) : 1e-6;
    detail::FitProblem prob;
    prob.fixed_b = opts.fixed_b;
    std::vector<double> distinct;
    for (size_t idx : order) {
        double n = curve.block_counts[idx];
        if (distinct.empty() || distinct.back() != n) {
            distinct.push_back(n);
        }
        if (static_cast<int>(distinct.size()) <= opts.skip_depths) {
            continue;
        }
        prob.n.push_back(n);
        prob.y.push_back(curve.means[idx]);
        prob.w.push_back(1.0 / std::max(curve.stderrs[idx], floor));
    }
    int n_distinct = static_cast<int>(distinct.size()) - opts.skip_depths;
    if (n_distinct < 4) {
        throw ParameterError("fit needs at least 4 distinct block counts, got " + std::to_string(n_distinct));
    }

    FitResult res;
    double y_min = *std::min_element(prob.y.begin(), prob.y.end());
    double y_max = *std::max_element(prob.y.begin(), prob.y.end());

    // Initial guess: B from the floor of the data, A from the first point,
    // alpha from a log-linear regression of (y - B).
    double b0 = opts.fixed_b.value_or(std::clamp(y_min, 0.0, 0.6));
    double first_n = prob.n.front();
    double a0 = std::clamp(prob.y.front() - b0, 0.0, 1.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (size_t i = 0; i < prob.n.size(); ++i) {
        double d = prob.y[i] - b0;
        if (d > 1e-9) {
            double x = prob.n[i] - first_n;
            double ly = std::log(d);
            sx += x;
            sy += ly;
            sxx += x * x;
            sxy += x * ly;
            ++used;
        }
    }
    double alpha0 = 0.95;
    if (used >= 2 && used * sxx - sx * sx > 0) {
        double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
        alpha0 = std::exp(slope);
    }
    alpha0 = std::clamp(alpha0, 0.5, 0.999999);
    if (first_n > 0) {
        a0 = std::clamp(a0 / std::pow(alpha0, first_n), 0.0, 1.0);
    }
    std::array<double, 3> th = detail::clamp_params({a0, b0, alpha0});

    double cost = detail::fit_cost(prob, th);
    double lambda = 1e-3;
    bool converged = false;
    Eigen::MatrixXd j;
    Eigen::VectorXd r;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        detail::fit_linearize(prob, th, j, r);
        Eigen::Matrix3d jtj = j.transpose() * j;
        Eigen::Vector3d g = j.transpose() * r;
        if (prob.fixed_b) {
            jtj.row(1).setZero();
            jtj.col(1).setZero();
            jtj(1, 1) = 1;
            g(1) = 0;
        }
        bool improved = false;
        while (lambda < 1e16) {
            Eigen::Matrix3d a = jtj;
            for (int d = 0; d < 3; ++d) {
                a(d, d) += lambda * std::max(jtj(d, d), 1e-12);
            }
            Eigen::Vector3d step = a.ldlt().solve(g);
            std::array<double, 3> trial = detail::clamp_params({th[0] + step(0), th[1] + step(1), th[2] + step(2)});
            if (prob.fixed_b) {
                trial[1] = *prob.fixed_b;
            }
            double trial_cost = detail::fit_cost(prob, trial);
            if (trial_cost <= cost) {
                double moved = std::abs(trial[0] - th[0]) + std::abs(trial[1] - th[1]) + std::abs(trial[2] - th[2]);
                double drop = cost - trial_cost;
                th = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 10, 1e-15);
                improved = true;
                if (moved < 1e-15 || drop <= 1e-16 * std::max(cost, 1e-300)) {
                    converged = true;
                }
                break;
            }
            lambda *= 10;
        }
        if (!improved) {
            // No downhill step exists at any damping: we sit at a (bounded) minimum.
            converged = true;
        }
        if (converged) {
            break;
        }
    }
    res.iterations = it;
    res.A = th[0];
    res.B = th[1];
    res.alpha = th[2];
    res.residual_norm = std::sqrt(cost);
    for (size_t i = 0; i < prob.n.size(); ++i) {
        res.max_abs_residual = std::max(res.max_abs_residual, std::abs(prob.y[i] - res.model(prob.n[i])));
    }

    detail::fit_linearize(prob, th, j, r);
    Eigen::Matrix3d jtj = j.transpose() * j;
    int n_free = prob.fixed_b ? 2 : 3;
    Eigen::MatrixXd reduced(n_free, n_free);
    std::array<int, 3> idx = prob.fixed_b ? std::array<int, 3>{0, 2, -1} : std::array<int, 3>{0, 1, 2};
    for (int a = 0; a < n_free; ++a) {
        for (int b = 0; b < n_free; ++b) {
            reduced(a, b) = jtj(idx[a], idx[b]);
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(reduced);
    bool singular = !lu.isInvertible();
    Eigen::MatrixXd cov;
    if (!singular) {
        cov = lu.inverse();
        auto err = [&](int a) { return std::sqrt(std::max(cov(a, a), 0.0)); };
        res.A_err = err(0);
        res.alpha_err = err(n_free - 1);
        res.B_err = prob.fixed_b ? 0.0 : err(1);
        singular = !std::isfinite(res.alpha_err);
    }

    bool flat = (y_max - y_min) <= 1e-12 || res.A <= 1e-12;
    if (flat || singular) {
        res.status = FitStatus::unidentifiable;
    } else {
        res.status = converged ? FitStatus::ok : FitStatus::not_converged;
    }
    res.epsilon = (1 - res.alpha) / 2;
    res.epsilon_err = res.alpha_err / 2;
    return res;
}

struct EpsilonEstimate {
    double epsilon = 0;
    double err = 0;
    bool interleaved = false;
};

/// Raw (1 - alpha)/2, or (1 - alpha/alpha_ref)/2 when a reference is given,
/// with first-order propagated uncertainty.
inline EpsilonEstimate extract_epsilon(const FitResult &fit, std::optional<double> alpha_ref = std::nullopt,
                                       double alpha_ref_err = 0) {
    if (!fit.converged()) {
        throw FitError(std::string("cannot extract an error rate from a fit with status ") + to_string(fit.status));
    }
    if (!alpha_ref) {
        return {(1 - fit.alpha) / 2, fit.alpha_err / 2, false};
    }
    if (!(*alpha_ref > 0 && *alpha_ref <= 1)) {
        throw ParameterError("reference alpha must lie in (0, 1]");
    }
    double ratio = fit.alpha / *alpha_ref;
    double d_alpha = 1 / (2 * *alpha_ref);
    double d_ref = ratio / (2 * *alpha_ref);
    double se = std::sqrt(d_alpha * d_alpha * fit.alpha_err * fit.alpha_err + d_ref * d_ref * alpha_ref_err * alpha_ref_err);
    return {(1 - ratio) / 2, se, true};
}

}  // namespace dcrb

#endif
