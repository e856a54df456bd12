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

#include "hbrx/core.hpp"

using namespace hbrx;

TEST_CASE("default configuration derives the nominal scalars") {
    const SystemConfig c;
    const DerivedScalars d = derive(c);
    CHECK(d.Nc == 128);
    CHECK(d.D0 == 32);
    CHECK(d.D == 32);
    CHECK(d.Bw == doctest::Approx(12.8e9));
    CHECK(d.fs == doctest::Approx(12.8e9));
    CHECK(d.sigma2 == doctest::Approx(0.01));
    CHECK(d.rho == doctest::Approx(100.0));
}

TEST_CASE("oversampling scales Nc, fs and D but not the bandwidth") {
    SystemConfig c;
    c.beta = 4;
    const DerivedScalars d = derive(c);
    CHECK(d.Nc == 512);
    CHECK(d.fs == doctest::Approx(4 * 12.8e9));
    CHECK(d.Bw == doctest::Approx(12.8e9));
    CHECK(d.D == 128);
}

TEST_CASE("inconsistent configurations are rejected") {
    auto bad = [](auto mutate) {
        SystemConfig c;
        mutate(c);
        CHECK_THROWS_AS(derive(c), std::invalid_argument);
    };
    bad([](SystemConfig& c) { c.beta = 0; });
    bad([](SystemConfig& c) { c.b = 0; });
    bad([](SystemConfig& c) { c.b = 13; });
    bad([](SystemConfig& c) { c.I = 5; });
    bad([](SystemConfig& c) { c.Nrf = 200; });
    bad([](SystemConfig& c) { c.K = 30; });
    bad([](SystemConfig& c) { c.delta_f = 0.0; });
    bad([](SystemConfig& c) { c.rolloff = 1.5; });
    bad([](SystemConfig& c) { c.snr_db = NAN; });
}

TEST_CASE("soft warnings do not invalidate a configuration") {
    SystemConfig c;
    c.M = 8;
    c.Nrf = 4;
    c.I = 2;
    c.K = 16;
    CHECK_NOTHROW(derive(c));
    CHECK(config_warnings(c).size() == 1);
    CHECK(config_warnings(SystemConfig{}).empty());
}

TEST_CASE("with_bandwidth sets the subcarrier spacing") {
    const SystemConfig c = with_bandwidth(SystemConfig{}, 30e9);
    CHECK(c.K * c.delta_f == doctest::Approx(30e9));
    CHECK_THROWS(with_bandwidth(SystemConfig{}, -1.0));
}

TEST_CASE("random streams are reproducible and independent") {
    RngStream a(7, 3), b(7, 3), c(7, 4);
    bool same = true, differ = false;
    for (int n = 0; n < 100; ++n) {
        const double x = a.normal(), y = b.normal(), z = c.normal();
        same = same && x == y;
        differ = differ || x != z;
    }
    CHECK(same);
    CHECK(differ);

    RngStream s1 = RngStream(7, 3).substream(5), s2 = RngStream(7, 3).substream(5), s3 = RngStream(7, 3).substream(6);
    CHECK(s1.normal() == s2.normal());
    CHECK(s1.stream_id() != s3.stream_id());
}

TEST_CASE("complex normal draws are unit power and circular") {
    RngStream rng(1, 0);
    const int n = 200000;
    double power = 0.0;
    cd pseudo{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const cd x = rng.complex_normal();
        power += std::norm(x);
        pseudo += x * x;
    }
    CHECK(power / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(pseudo) / n < 0.01);
}
