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

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbrx/core.hpp"

namespace hbrx {

/// MMSE scalar quantizer for a unit-variance real Gaussian input.
///
/// `levels` holds the 2^b reconstruction points in ascending order and
/// `thresholds` the 2^b + 1 cell boundaries, with -inf and +inf at the ends.
/// `gamma` is the mean squared error for a standard Gaussian input and
/// `alpha = 1 - gamma` the corresponding Bussgang gain.
struct ScalarQuantizer {
    int bits = 0;
    std::vector<double> levels;
    std::vector<double> thresholds;
    double gamma = 0.0;
    double alpha = 1.0;

    int num_levels() const { return static_cast<int>(levels.size()); }
    // Maps u to the level of the cell [t_i, t_{i+1}) containing it; a value
    // on a threshold goes to the upper cell.
    double apply(double u) const;
};

class LloydMaxError : public std::runtime_error {
public:
    LloydMaxError(const std::string& what, ScalarQuantizer last, double residual)
        : std::runtime_error(what), last_(std::move(last)), residual_(residual) {}
    const ScalarQuantizer& last_iterate() const { return last_; }
    double residual() const { return residual_; }

private:
    ScalarQuantizer last_;
    double residual_;
};

// Lloyd-Max design for a standard Gaussian, stopping once the largest level
// update falls below `tol`. Throws LloydMaxError when `max_iter` is reached.
ScalarQuantizer lloyd_max(int b, double tol = 1e-10, int max_iter = 10000);

// Process-wide cached lloyd_max(b) with default settings.
const ScalarQuantizer& lloyd_max_cached(int b);

// Closed-form approximation 2^(-1.74 b + 0.28) of the distortion factor.
double gamma_fit(int b);

// Mean squared error of `levels`/`thresholds` for a standard Gaussian input.
double gaussian_mse(const ScalarQuantizer& q);

// Elementwise complex quantization, real and imaginary parts independently,
// with the codebook scaled per entry: Q_s(u) = s * Q(u / s).
CVec quantize(const CVec& x, const ScalarQuantizer& q, std::span<const double> scales);

// Monte Carlo E[Q(y) y] / E[y^2] over unit-variance real Gaussian samples.
double bussgang_alpha_empirical(const ScalarQuantizer& q, long n_samples, RngStream& rng);

}  // namespace hbrx
