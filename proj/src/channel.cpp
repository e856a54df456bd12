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

#include "hbrx/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "dft.hpp"

namespace hbrx {

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(M_PI * x) / (M_PI * x);
}

}  // namespace

PathParams draw_paths(const SystemConfig& config, RngStream& rng) {
    const DerivedScalars d = derive(config);
    const double max_delay = d.D0 / d.Bw;
    PathParams out;
    out.users = config.I;
    out.paths_per_user = config.L;
    out.paths.reserve(static_cast<size_t>(config.I * config.L));
    for (int i = 0; i < config.I; ++i) {
        for (int l = 0; l < config.L; ++l) {
            Path p{};
            p.gain = rng.complex_normal();
            p.delay = max_delay * rng.uniform(0.0, 1.0);
            p.aoa = rng.uniform(0.0, 2.0 * M_PI);
            out.paths.push_back(p);
        }
    }
    return out;
}

CVec steering_vector(double theta, double fk, double fc, int M) {
    if (M < 1) throw std::invalid_argument("steering_vector: M must be positive");
    const double phase_step = -M_PI * (fk / fc) * std::sin(theta);
    const double norm = 1.0 / std::sqrt(static_cast<double>(M));
    CVec a(M);
    for (int m = 0; m < M; ++m) a(m) = std::polar(norm, phase_step * m);
    return a;
}

double raised_cosine(double t, double Ts, double rolloff) {
    const double x = t / Ts;
    const double denom = 1.0 - 4.0 * rolloff * rolloff * x * x;
    if (std::abs(denom) < 1e-10) return (M_PI / 4.0) * sinc(1.0 / (2.0 * rolloff));
    return sinc(x) * std::cos(M_PI * rolloff * x) / denom;
}

double subcarrier_frequency(const SystemConfig& config, int k) {
    const int Nc = config.beta * config.K;
    return config.fc + (k + 1 - (Nc + 1) / 2.0) * config.delta_f;
}

ChannelRealization freq_channel(const PathParams& paths, const SystemConfig& config) {
    const DerivedScalars d = derive(config);
    if (paths.users != config.I || paths.paths_per_user != config.L ||
        paths.paths.size() != static_cast<size_t>(config.I * config.L))
        throw std::invalid_argument("freq_channel: path parameters do not match the configuration");

    const int Nc = d.Nc;
    const int M = config.M;
    const double Ts = 1.0 / d.Bw;
    const double path_scale = std::sqrt(static_cast<double>(M) / config.L);

    // Per-path frequency response g_{i,l}[k] from the sampled pulse.
    std::vector<std::vector<cd>> g(paths.paths.size());
    for (size_t n = 0; n < paths.paths.size(); ++n) {
        const Path& p = paths.paths[n];
        std::vector<cd> taps(static_cast<size_t>(d.D));
        for (int tap = 0; tap < d.D; ++tap)
            taps[static_cast<size_t>(tap)] = p.gain * raised_cosine(tap / d.fs - p.delay, Ts, config.rolloff);
        g[n] = detail::dft(taps, Nc);
    }

    ChannelRealization ch;
    ch.paths = paths;
    ch.K = config.K;
    ch.freq.assign(static_cast<size_t>(Nc), CMat::Zero(M, config.I));
    for (int k = 0; k < Nc; ++k) {
        const double fk = subcarrier_frequency(config, k);
        CMat& H = ch.freq[static_cast<size_t>(k)];
        for (int i = 0; i < config.I; ++i) {
            for (int l = 0; l < config.L; ++l) {
                const size_t n = static_cast<size_t>(i * config.L + l);
                H.col(i) += (path_scale * g[n][static_cast<size_t>(k)]) *
                            steering_vector(paths.paths[n].aoa, fk, config.fc, M);
            }
        }
    }
    return ch;
}

std::vector<CMat> time_taps(const ChannelRealization& ch) {
    const int Nc = ch.Nc(), M = ch.M(), I = ch.I();
    // One series per (m, i) entry, laid out as rows.
    CMat series(M * I, Nc);
    for (int k = 0; k < Nc; ++k) {
        const CMat& H = ch.freq[static_cast<size_t>(k)];
        for (int i = 0; i < I; ++i) series.block(i * M, k, M, 1) = H.col(i);
    }
    const CMat taps_series = detail::idft_rows(series, 1.0 / Nc);
    std::vector<CMat> taps(static_cast<size_t>(Nc), CMat(M, I));
    for (int d = 0; d < Nc; ++d)
        for (int i = 0; i < I; ++i) taps[static_cast<size_t>(d)].col(i) = taps_series.block(i * M, d, M, 1);
    return taps;
}

CMat stacked_data_channel(const ChannelRealization& ch) {
    const int M = ch.M(), I = ch.I();
    CMat out(M, static_cast<Eigen::Index>(ch.K) * I);
    for (int k = 0; k < ch.K; ++k) out.middleCols(static_cast<Eigen::Index>(k) * I, I) = ch.freq[static_cast<size_t>(k)];
    return out;
}

CMat average_channel_gram(const ChannelRealization& ch) {
    const CMat stacked = stacked_data_channel(ch);
    CMat gram = CMat::Zero(ch.M(), ch.M());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(stacked, 1.0 / ch.K);
    return CMat(gram.selfadjointView<Eigen::Lower>());
}

nlohmann::json paths_to_json(const PathParams& paths) {
    nlohmann::json users = nlohmann::json::array();
    for (int i = 0; i < paths.users; ++i) {
        nlohmann::json user = nlohmann::json::array();
        for (int l = 0; l < paths.paths_per_user; ++l) {
            const Path& p = paths.at(i, l);
            user.push_back({{"lambda_re", p.gain.real()},
                            {"lambda_im", p.gain.imag()},
                            {"tau", p.delay},
                            {"theta", p.aoa}});
        }
        users.push_back(std::move(user));
    }
    return {{"users", std::move(users)}};
}

PathParams paths_from_json(const nlohmann::json& j) {
    const auto& users = j.at("users");
    PathParams out;
    out.users = static_cast<int>(users.size());
    out.paths_per_user = out.users > 0 ? static_cast<int>(users.at(0).size()) : 0;
    for (const auto& user : users) {
        if (static_cast<int>(user.size()) != out.paths_per_user)
            throw std::invalid_argument("paths_from_json: every user needs the same number of paths");
        for (const auto& p : user)
            out.paths.push_back(Path{cd{p.at("lambda_re").get<double>(), p.at("lambda_im").get<double>()},
                                     p.at("tau").get<double>(), p.at("theta").get<double>()});
    }
    return out;
}

}  // namespace hbrx
