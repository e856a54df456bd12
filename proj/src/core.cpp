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

#include "hbrx/core.hpp"

#include <cmath>
#include <stdexcept>

namespace hbrx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

DerivedScalars derive(const SystemConfig& c) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    };
    require(c.M >= 1, "M must be positive");
    require(c.Nrf >= 1, "Nrf must be positive");
    require(c.I >= 1, "I must be positive");
    require(c.K >= 1, "K must be positive");
    require(c.beta >= 1, "beta must be a positive integer");
    require(c.L >= 1, "L must be positive");
    require(c.b >= 1 && c.b <= 12, "b must lie in [1, 12]");
    require(c.I <= c.Nrf, "I must not exceed Nrf");
    require(c.Nrf <= c.M, "Nrf must not exceed M");
    require(c.fc > 0.0 && c.delta_f > 0.0, "fc and delta_f must be positive");
    require(c.p > 0.0, "p must be positive");
    require(std::isfinite(c.snr_db), "snr_db must be finite");
    require(c.rolloff > 0.0 && c.rolloff <= 1.0, "rolloff must lie in (0, 1]");
    require(c.D0 >= 0, "D0 must be non-negative");

    DerivedScalars d{};
    if (c.D0 == 0) {
        require(c.K % 4 == 0, "K must be divisible by 4 when D0 defaults to K/4");
        d.D0 = c.K / 4;
    } else {
        d.D0 = c.D0;
    }
    d.Nc = c.beta * c.K;
    d.Bw = c.K * c.delta_f;
    d.fs = d.Nc * c.delta_f;
    d.D = c.beta * d.D0;
    require(d.D >= 1 && d.D <= d.Nc, "delay spread D = beta * D0 must lie in [1, Nc]");
    d.sigma2 = c.p / std::pow(10.0, c.snr_db / 10.0);
    d.rho = c.p / d.sigma2;
    return d;
}

std::vector<std::string> config_warnings(const SystemConfig& c) {
    std::vector<std::string> out;
    if (4 * c.Nrf > c.M) out.push_back("Nrf is not much smaller than M; complexity estimates assume Nrf << M");
    if (static_cast<long long>(c.beta) * c.K > 65536) out.push_back("Nc exceeds 65536 subcarriers; memory grows as O(beta K M I)");
    return out;
}

SystemConfig with_bandwidth(SystemConfig config, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
    config.delta_f = bandwidth_hz / config.K;
    return config;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), engine_(seeded_engine(master_seed, stream_id)) {}

double RngStream::normal() { return normal_(engine_); }

double RngStream::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

cd RngStream::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

RngStream RngStream::substream(std::uint64_t tag) const {
    return RngStream(master_seed_, splitmix64(stream_id_ ^ splitmix64(tag + 0x632BE59BD9B4E019ULL)));
}

}  // namespace hbrx
