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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "../support/oracles.hpp"
#include "hbrx/quantizer.hpp"

using namespace hbrx;

TEST_CASE("Lloyd-Max matches an independent fixed point") {
    for (int b = 1; b <= 4; ++b) {
        const ScalarQuantizer q = lloyd_max(b);
        const auto ref = oracle::lloyd_fixed_point(b);
        REQUIRE(q.num_levels() == (1 << b));
        for (int i = 0; i < q.num_levels(); ++i) CHECK(q.levels[static_cast<size_t>(i)] == doctest::Approx(ref.levels[static_cast<size_t>(i)]).epsilon(1e-8));
        CHECK(q.gamma == doctest::Approx(ref.mse).epsilon(1e-8));
        CHECK(q.alpha == doctest::Approx(1.0 - q.gamma));
    }
}

TEST_CASE("Lloyd-Max tabulated values") {
    CHECK(lloyd_max(1).levels[1] == doctest::Approx(std::sqrt(2.0 / M_PI)));
    CHECK(lloyd_max(1).gamma == doctest::Approx(1.0 - 2.0 / M_PI));
    CHECK(lloyd_max(2).gamma == doctest::Approx(0.1175).epsilon(1e-3));
    CHECK(lloyd_max(3).gamma == doctest::Approx(0.03454).epsilon(1e-3));
    CHECK(lloyd_max(4).gamma == doctest::Approx(0.009497).epsilon(1e-3));
}

TEST_CASE("quantizer structure") {
    for (int b : {1, 3, 6, 10, 12}) {
        const ScalarQuantizer q = lloyd_max(b);
        REQUIRE(q.thresholds.size() == q.levels.size() + 1);
        CHECK(std::isinf(q.thresholds.front()));
        CHECK(std::isinf(q.thresholds.back()));
        for (size_t i = 0; i < q.levels.size(); ++i) {
            CHECK(q.levels[i] == doctest::Approx(-q.levels[q.levels.size() - 1 - i]).epsilon(1e-9));
            CHECK(q.levels[i] > q.thresholds[i]);
            CHECK(q.levels[i] < q.thresholds[i + 1]);
        }
        CHECK(gaussian_mse(q) == doctest::Approx(q.gamma).epsilon(1e-9));
        if (b > 1) CHECK(q.gamma < lloyd_max(b - 1).gamma);
    }
}

TEST_CASE("out of range resolutions are rejected") {
    CHECK_THROWS(lloyd_max(0));
    CHECK_THROWS(lloyd_max(13));
}

TEST_CASE("apply picks the enclosing cell") {
    const ScalarQuantizer q = lloyd_max(2);
    CHECK(q.apply(-10.0) == q.levels[0]);
    CHECK(q.apply(10.0) == q.levels[3]);
    CHECK(q.apply(0.0) == q.levels[2]);  // on a threshold goes up
    CHECK(q.apply(q.thresholds[1]) == q.levels[1]);
    CHECK(q.apply(std::nextafter(q.thresholds[1], -10.0)) == q.levels[0]);
}

TEST_CASE("complex quantization scales the codebook per entry") {
    const ScalarQuantizer q = lloyd_max(3);
    CVec x(2);
    x << cd{0.3, -1.2}, cd{5.0, 0.1};
    const std::vector<double> s{0.5, 4.0};
    const CVec y = quantize(x, q, s);
    CHECK(y(0).real() == doctest::Approx(0.5 * q.apply(0.6)));
    CHECK(y(0).imag() == doctest::Approx(0.5 * q.apply(-2.4)));
    CHECK(y(1).real() == doctest::Approx(4.0 * q.apply(1.25)));
    CHECK(y(1).imag() == doctest::Approx(4.0 * q.apply(0.025)));
}

TEST_CASE("closed-form distortion fit") {
    for (int b = 1; b <= 4; ++b) {
        CHECK(gamma_fit(b) == doctest::Approx(std::pow(2.0, -1.74 * b + 0.28)));
        CHECK(std::abs(gamma_fit(b) - lloyd_max(b).gamma) / lloyd_max(b).gamma < 0.15);
    }
}

TEST_CASE("Bussgang gain of the MMSE quantizer is 1 - gamma") {
    for (int b : {1, 2, 4}) {
        const ScalarQuantizer& q = lloyd_max_cached(b);
        RngStream rng(9, static_cast<std::uint64_t>(b));
        CHECK(bussgang_alpha_empirical(q, 200000, rng) == doctest::Approx(q.alpha).epsilon(0.01));
    }
}

TEST_CASE("cached designs are shared") {
    CHECK(&lloyd_max_cached(5) == &lloyd_max_cached(5));
    CHECK(lloyd_max_cached(5).gamma == lloyd_max(5).gamma);
}
