// SPDX-License-Identifier: Apache-2.0
//
// hbrx: hybrid receiver design for low-resolution massive MIMO-OFDM
// Copyright (C) 2026 The hbrx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hbrx/quantizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

#include <boost/math/distributions/normal.hpp>

namespace hbrx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pdf(double x) {
    if (std::isinf(x)) return 0.0;
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// P(a <= Y < b) for standard Gaussian Y, computed on the tail side that keeps
// precision for cells far from the origin.
double cell_probability(double a, double b) {
    if (a >= 0.0) return 0.5 * (std::erfc(a * M_SQRT1_2) - std::erfc(b * M_SQRT1_2));
    if (b <= 0.0) return 0.5 * (std::erfc(-b * M_SQRT1_2) - std::erfc(-a * M_SQRT1_2));
    return 1.0 - 0.5 * std::erfc(-a * M_SQRT1_2) - 0.5 * std::erfc(b * M_SQRT1_2);
}

// Integral of y^k phi(y) over [a, b] for k = 0, 1, 2.
std::array<double, 3> cell_moments(double a, double b) {
    const double p0 = cell_probability(a, b);
    const double p1 = pdf(a) - pdf(b);
    const double ta = std::isinf(a) ? 0.0 : a * pdf(a);
    const double tb = std::isinf(b) ? 0.0 : b * pdf(b);
    return {p0, p1, p0 + ta - tb};
}

void set_midpoint_thresholds(ScalarQuantizer& q) {
    const int n = q.num_levels();
    q.thresholds.assign(static_cast<size_t>(n + 1), 0.0);
    q.thresholds.front() = -kInf;
    q.thresholds.back() = kInf;
    for (int i = 1; i < n; ++i)
        q.thresholds[static_cast<size_t>(i)] = 0.5 * (q.levels[static_cast<size_t>(i - 1)] + q.levels[static_cast<size_t>(i)]);
}

// One centroid/nearest-neighbor sweep; returns the largest level movement.
double lloyd_sweep(ScalarQuantizer& q) {
    set_midpoint_thresholds(q);
    double movement = 0.0;
    for (int i = 0; i < q.num_levels(); ++i) {
        const auto m = cell_moments(q.thresholds[static_cast<size_t>(i)], q.thresholds[static_cast<size_t>(i + 1)]);
        const double centroid = m[1] / m[0];
        movement = std::max(movement, std::abs(centroid - q.levels[static_cast<size_t>(i)]));
        q.levels[static_cast<size_t>(i)] = centroid;
    }
    return movement;
}

// Newton step on F_i(c) = c_i - centroid_i(c), whose Jacobian is tridiagonal
// because cell i only sees its two neighbours through the midpoints. Returns
// false (leaving q untouched) if the step would break the level ordering.
bool newton_step(ScalarQuantizer& q) {
    const int n = q.num_levels();
    set_midpoint_thresholds(q);
    std::vector<double> lower(n, 0.0), diag(n, 1.0), upper(n, 0.0), rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double a = q.thresholds[static_cast<size_t>(i)];
        const double b = q.thresholds[static_cast<size_t>(i + 1)];
        const auto m = cell_moments(a, b);
        const double centroid = m[1] / m[0];
        const double dm_da = std::isinf(a) ? 0.0 : pdf(a) * (centroid - a) / m[0];
        const double dm_db = std::isinf(b) ? 0.0 : pdf(b) * (b - centroid) / m[0];
        lower[i] = -0.5 * dm_da;
        upper[i] = -0.5 * dm_db;
        diag[i] = 1.0 - 0.5 * (dm_da + dm_db);
        rhs[i] = -(q.levels[static_cast<size_t>(i)] - centroid);
    }
    // Thomas algorithm.
    for (int i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> step(n);
    step[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) step[i] = (rhs[i] - upper[i] * step[i + 1]) / diag[i];

    std::vector<double> next(q.levels);
    for (int i = 0; i < n; ++i) next[i] += step[i];
    for (int i = 1; i < n; ++i)
        if (!(next[i] > next[i - 1])) return false;
    q.levels = std::move(next);
    return true;
}

void finalize(ScalarQuantizer& q) {
    set_midpoint_thresholds(q);
    q.gamma = gaussian_mse(q);
    q.alpha = 1.0 - q.gamma;
}

}  // namespace

double ScalarQuantizer::apply(double u) const {
    // Interior thresholds are t_1..t_{n-1}; the count of those <= u is the cell.
    const auto first = thresholds.begin() + 1;
    const auto last = thresholds.end() - 1;
    const auto cell = std::upper_bound(first, last, u) - first;
    return levels[static_cast<size_t>(cell)];
}

double gaussian_mse(const ScalarQuantizer& q) {
    double mse = 0.0;
    for (int i = 0; i < q.num_levels(); ++i) {
        const auto [p0, p1, p2] = cell_moments(q.thresholds[static_cast<size_t>(i)], q.thresholds[static_cast<size_t>(i + 1)]);
        const double c = q.levels[static_cast<size_t>(i)];
        mse += p2 - 2.0 * c * p1 + c * c * p0;
    }
    return mse;
}

ScalarQuantizer lloyd_max(int b, double tol, int max_iter) {
    if (b < 1 || b > 12) throw std::invalid_argument("lloyd_max: b must lie in [1, 12]");
    const int n = 1 << b;
    const boost::math::normal_distribution<double> standard;

    ScalarQuantizer q;
    q.bits = b;
    q.levels.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) q.levels[static_cast<size_t>(i)] = boost::math::quantile(standard, (2.0 * i + 1.0) / (2.0 * n));

    // Plain sweeps converge linearly with a rate that approaches one as the
    // level count grows, so after a warm-up each sweep is followed by a
    // Newton step toward the same fixed point.
    constexpr int kWarmupSweeps = 32;
    double residual = kInf;
    for (int iter = 0; iter < max_iter; ++iter) {
        residual = lloyd_sweep(q);
        if (residual < tol) {
            finalize(q);
            return q;
        }
        if (iter >= kWarmupSweeps) newton_step(q);
    }
    finalize(q);
    throw LloydMaxError("lloyd_max: no convergence for b = " + std::to_string(b), std::move(q), residual);
}

const ScalarQuantizer& lloyd_max_cached(int b) {
    if (b < 1 || b > 12) throw std::invalid_argument("lloyd_max_cached: b must lie in [1, 12]");
    static std::array<std::optional<ScalarQuantizer>, 13> cache;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto& slot = cache[static_cast<size_t>(b)];
    if (!slot) slot = lloyd_max(b);
    return *slot;
}

double gamma_fit(int b) {
    if (b < 1) throw std::invalid_argument("gamma_fit: b must be positive");
    return std::exp2(-1.74 * b + 0.28);
}

CVec quantize(const CVec& x, const ScalarQuantizer& q, std::span<const double> scales) {
    if (scales.size() != static_cast<size_t>(x.size())) throw std::invalid_argument("quantize: one scale per entry required");
    CVec out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double s = scales[static_cast<size_t>(j)];
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("quantize: scales must be positive and finite");
        const cd v = x(j);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("quantize: non-finite input");
        out(j) = cd{s * q.apply(v.real() / s), s * q.apply(v.imag() / s)};
    }
    return out;
}

double bussgang_alpha_empirical(const ScalarQuantizer& q, long n_samples, RngStream& rng) {
    if (n_samples < 10000) throw std::invalid_argument("bussgang_alpha_empirical: at least 10^4 samples required");
    double cross = 0.0, power = 0.0;
    for (long n = 0; n < n_samples; ++n) {
        const double y = rng.normal();
        cross += q.apply(y) * y;
        power += y * y;
    }
    return cross / power;
}

}  // namespace hbrx
