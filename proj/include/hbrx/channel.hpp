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

#include <vector>

#include <json.hpp>

#include "hbrx/core.hpp"

namespace hbrx {

struct Path {
    cd gain;       // lambda ~ CN(0, 1)
    double delay;  // seconds
    double aoa;    // radians
};

// L propagation paths per user, stored user-major.
struct PathParams {
    int users = 0;
    int paths_per_user = 0;
    std::vector<Path> paths;

    const Path& at(int user, int path) const { return paths[static_cast<size_t>(user * paths_per_user + path)]; }
    Path& at(int user, int path) { return paths[static_cast<size_t>(user * paths_per_user + path)]; }
};

// Frequency-domain channel over the full sampled band: freq[k] is M x I with
// column i the channel of user i on subcarrier k, for every k in [0, Nc).
// Only the first K subcarriers carry data.
struct ChannelRealization {
    std::vector<CMat> freq;
    PathParams paths;
    int K = 0;

    int Nc() const { return static_cast<int>(freq.size()); }
    int M() const { return freq.empty() ? 0 : static_cast<int>(freq.front().rows()); }
    int I() const { return freq.empty() ? 0 : static_cast<int>(freq.front().cols()); }
};

PathParams draw_paths(const SystemConfig& config, RngStream& rng);

// Half-wavelength uniform linear array response at frequency fk, normalized to
// unit norm. The f_k / f_c factor models beam squint.
CVec steering_vector(double theta, double fk, double fc, int M);

double raised_cosine(double t, double Ts, double rolloff);

// Physical frequency of subcarrier k on the Nc-point grid.
double subcarrier_frequency(const SystemConfig& config, int k);

ChannelRealization freq_channel(const PathParams& paths, const SystemConfig& config);

// Nc time-domain taps H[d] = (1/Nc) sum_k H~[k] exp(+j 2 pi k d / Nc).
std::vector<CMat> time_taps(const ChannelRealization& ch);

// Data-band channels stacked side by side: [H~[0], ..., H~[K-1]], M x (K I).
CMat stacked_data_channel(const ChannelRealization& ch);

// (1/K) sum_{k<K} H~[k] H~[k]^H.
CMat average_channel_gram(const ChannelRealization& ch);

nlohmann::json paths_to_json(const PathParams& paths);
PathParams paths_from_json(const nlohmann::json& j);

}  // namespace hbrx
