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

#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library code paths they check (numeric integration instead of closed-form
// cell moments, dense loops instead of stacked products).

#include <cmath>
#include <vector>

#include "hbrx/channel.hpp"
#include "hbrx/core.hpp"

namespace hbrx::oracle {

struct GaussianQuantizer {
    std::vector<double> levels;
    std::vector<double> thresholds;  // interior thresholds only
    double mse = 0.0;
};

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Composite Simpson integral of x^p phi(x) over [a, b], p in {0, 1, 2}.
inline double gauss_moment(int p, double a, double b, int n = 4000) {
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = a + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * std::pow(x, p) * phi(x);
    }
    return sum * h / 3.0;
}

// Lloyd fixed point with numerically integrated cell moments over [-12, 12]:
// levels become the conditional means of their cells, thresholds the
// midpoints of neighbours.
inline GaussianQuantizer lloyd_fixed_point(int b, int sweeps = 100000) {
    const int n = 1 << b;
    const double lo = -12.0, hi = 12.0;
    GaussianQuantizer q;
    q.levels.resize(n);
    for (int i = 0; i < n; ++i) q.levels[i] = -3.0 + 6.0 * (i + 0.5) / n;
    q.thresholds.resize(n - 1);
    auto edge = [&](int i) { return i == 0 ? lo : (i == n ? hi : q.thresholds[i - 1]); };
    for (int s = 0; s < sweeps; ++s) {
        for (int i = 0; i + 1 < n; ++i) q.thresholds[i] = 0.5 * (q.levels[i] + q.levels[i + 1]);
        double change = 0.0;
        for (int i = 0; i < n; ++i) {
            const double nl = gauss_moment(1, edge(i), edge(i + 1)) / gauss_moment(0, edge(i), edge(i + 1));
            change = std::max(change, std::abs(nl - q.levels[i]));
            q.levels[i] = nl;
        }
        if (change < 1e-13) break;
    }
    for (int i = 0; i + 1 < n; ++i) q.thresholds[i] = 0.5 * (q.levels[i] + q.levels[i + 1]);
    q.mse = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = edge(i), c = edge(i + 1), y = q.levels[i];
        q.mse += gauss_moment(2, a, c) - 2.0 * y * gauss_moment(1, a, c) + y * y * gauss_moment(0, a, c);
    }
    return q;
}

// Channel built straight from the path sum with an explicit tap loop.
inline CMat channel_direct(const PathParams& paths, const SystemConfig& c, int k) {
    const DerivedScalars d = derive(c);
    const double Ts = 1.0 / d.Bw;
    const double fk = c.fc + (k + 1 - (d.Nc + 1) / 2.0) * c.delta_f;
    CMat H = CMat::Zero(c.M, c.I);
    for (int i = 0; i < c.I; ++i)
        for (int l = 0; l < c.L; ++l) {
            const Path& p = paths.at(i, l);
            cd g{0.0, 0.0};
            for (int tap = 0; tap < d.D; ++tap) {
                const double t = tap / d.fs - p.delay;
                double prc;
                const double x = 2.0 * c.rolloff * t / Ts;
                if (std::abs(std::abs(x) - 1.0) < 1e-12) {
                    prc = M_PI / 4.0 * std::sin(M_PI / (2.0 * c.rolloff)) / (M_PI / (2.0 * c.rolloff));
                } else {
                    const double u = t / Ts;
                    const double sinc = u == 0.0 ? 1.0 : std::sin(M_PI * u) / (M_PI * u);
                    prc = sinc * std::cos(M_PI * c.rolloff * u) / (1.0 - x * x);
                }
                g += p.gain * prc * std::exp(cd{0.0, -2.0 * M_PI * k * tap / d.Nc});
            }
            for (int m = 0; m < c.M; ++m)
                H(m, i) += std::sqrt(static_cast<double>(c.M) / c.L) * g *
                           std::exp(cd{0.0, -M_PI * m * (fk / c.fc) * std::sin(p.aoa)}) / std::sqrt(static_cast<double>(c.M));
        }
    return H;
}

inline CMat random_cm(int M, int Nrf, RngStream& rng) {
    CMat U(M, Nrf);
    for (int n = 0; n < Nrf; ++n)
        for (int m = 0; m < M; ++m) U(m, n) = std::polar(1.0 / std::sqrt(static_cast<double>(M)), rng.uniform(0.0, 2.0 * M_PI));
    return U;
}

inline CMat random_cmat(int r, int c, RngStream& rng) {
    CMat A(r, c);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) A(i, j) = rng.complex_normal();
    return A;
}

}  // namespace hbrx::oracle
