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

#include "../support/oracles.hpp"
#include "hbrx/channel.hpp"

using namespace hbrx;

namespace {

SystemConfig small(int beta = 2) {
    SystemConfig c;
    c.M = 8;
    c.Nrf = 2;
    c.I = 2;
    c.K = 16;
    c.beta = beta;
    return c;
}

}  // namespace

TEST_CASE("frequency channel matches the explicit path sum") {
    for (int beta : {1, 2, 3}) {
        const SystemConfig c = small(beta);
        RngStream rng(11, static_cast<std::uint64_t>(beta));
        const PathParams paths = draw_paths(c, rng);
        const ChannelRealization ch = freq_channel(paths, c);
        REQUIRE(ch.Nc() == beta * c.K);
        for (int k : {0, 5, c.K - 1, ch.Nc() - 1}) {
            const CMat ref = oracle::channel_direct(paths, c, k);
            CHECK((ch.freq[static_cast<size_t>(k)] - ref).norm() <= 1e-10 * ref.norm());
        }
    }
}

TEST_CASE("path draws respect the delay spread") {
    const SystemConfig c = small();
    const DerivedScalars d = derive(c);
    RngStream rng(2, 0);
    const PathParams paths = draw_paths(c, rng);
    CHECK(paths.paths.size() == static_cast<size_t>(c.I * c.L));
    for (const Path& p : paths.paths) {
        CHECK(p.delay >= 0.0);
        CHECK(p.delay < d.D0 / d.Bw);
        CHECK(p.aoa >= 0.0);
        CHECK(p.aoa < 2.0 * M_PI);
    }
}

TEST_CASE("time taps invert the frequency response") {
    const SystemConfig c = small();
    RngStream rng(3, 0);
    const ChannelRealization ch = freq_channel(draw_paths(c, rng), c);
    const auto taps = time_taps(ch);
    const int Nc = ch.Nc();
    double energy_f = 0.0, energy_t = 0.0;
    for (int k = 0; k < Nc; ++k) {
        CMat H = CMat::Zero(c.M, c.I);
        for (int d = 0; d < Nc; ++d) H += taps[static_cast<size_t>(d)] * std::exp(cd{0.0, -2.0 * M_PI * k * d / Nc});
        CHECK((H - ch.freq[static_cast<size_t>(k)]).norm() <= 1e-10 * (1.0 + H.norm()));
        energy_f += ch.freq[static_cast<size_t>(k)].squaredNorm();
    }
    for (const CMat& T : taps) energy_t += T.squaredNorm();
    // Parseval for the unscaled DFT pair.
    CHECK(energy_f == doctest::Approx(Nc * energy_t).epsilon(1e-10));
}

TEST_CASE("steering vector") {
    const CVec a = steering_vector(0.3, 300e9, 300e9, 16);
    CHECK(a.norm() == doctest::Approx(1.0));
    for (int m = 0; m < 16; ++m)
        CHECK(std::arg(a(m) * std::conj(a(0))) ==
              doctest::Approx(std::remainder(-M_PI * m * std::sin(0.3), 2.0 * M_PI)).epsilon(1e-9));
    // Beam squint: the phase progression scales with f / fc.
    const CVec b = steering_vector(0.3, 330e9, 300e9, 16);
    CHECK(std::arg(b(1) * std::conj(b(0))) == doctest::Approx(-M_PI * 1.1 * std::sin(0.3)));
    CHECK_THROWS(steering_vector(0.0, 1.0, 1.0, 0));
}

TEST_CASE("raised cosine pulse") {
    const double Ts = 1e-9;
    CHECK(raised_cosine(0.0, Ts, 1.0) == doctest::Approx(1.0));
    for (int n : {-3, -2, -1, 1, 2, 3}) CHECK(std::abs(raised_cosine(n * Ts, Ts, 1.0)) < 1e-12);
    // Removable singularity at t = Ts / (2 rolloff).
    CHECK(raised_cosine(0.5 * Ts, Ts, 1.0) == doctest::Approx(0.5));
    CHECK(raised_cosine(0.5 * Ts, Ts, 1.0) == doctest::Approx(raised_cosine(0.5 * Ts + 1e-18, Ts, 1.0)).epsilon(1e-6));
}

TEST_CASE("subcarrier grid is centred on the carrier") {
    SystemConfig c = small(1);
    CHECK(subcarrier_frequency(c, 0) == doctest::Approx(c.fc - 7.5 * c.delta_f));
    CHECK(subcarrier_frequency(c, 15) == doctest::Approx(c.fc + 7.5 * c.delta_f));
}

TEST_CASE("average channel Gram matches an explicit sum") {
    const SystemConfig c = small();
    RngStream rng(4, 0);
    const ChannelRealization ch = freq_channel(draw_paths(c, rng), c);
    CMat ref = CMat::Zero(c.M, c.M);
    for (int k = 0; k < c.K; ++k) ref += ch.freq[static_cast<size_t>(k)] * ch.freq[static_cast<size_t>(k)].adjoint();
    ref /= c.K;
    CHECK((average_channel_gram(ch) - ref).norm() <= 1e-12 * ref.norm());
    const CMat S = stacked_data_channel(ch);
    CHECK(S.cols() == c.K * c.I);
    CHECK((S.middleCols(3 * c.I, c.I) - ch.freq[3]).norm() == 0.0);
}

TEST_CASE("path parameters survive a JSON round trip") {
    const SystemConfig c = small();
    RngStream rng(5, 0);
    const PathParams paths = draw_paths(c, rng);
    const PathParams back = paths_from_json(nlohmann::json::parse(paths_to_json(paths).dump()));
    REQUIRE(back.paths.size() == paths.paths.size());
    for (size_t n = 0; n < paths.paths.size(); ++n) {
        CHECK(back.paths[n].gain == paths.paths[n].gain);
        CHECK(back.paths[n].delay == paths.paths[n].delay);
        CHECK(back.paths[n].aoa == paths.paths[n].aoa);
    }
}

TEST_CASE("mismatched path parameters are rejected") {
    SystemConfig c = small();
    RngStream rng(6, 0);
    const PathParams paths = draw_paths(c, rng);
    c.I = 1;
    CHECK_THROWS_AS(freq_channel(paths, c), std::invalid_argument);
}
