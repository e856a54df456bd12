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

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hbrx {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Which distortion factor the analysis uses: the exact Lloyd-Max MSE or the
// closed-form fit 2^(-1.74 b + 0.28).
enum class GammaSource { lloyd_max, fit };

// Scenario scalars. Frequencies in Hz. The noise variance is derived from the
// SNR with the per-symbol transmit power p held fixed.
struct SystemConfig {
    int M = 128;           // antennas
    int Nrf = 4;           // RF chains
    int I = 4;             // users
    int K = 128;           // data subcarriers
    int beta = 1;          // oversampling ratio, Nc = beta * K
    double fc = 300e9;     // carrier
    double delta_f = 100e6;
    int b = 3;             // ADC bits
    double snr_db = 20.0;
    double p = 1.0;
    int L = 3;             // paths per user
    int D0 = 0;            // Nyquist-rate delay taps, 0 selects K/4
    double rolloff = 1.0;  // raised-cosine pulse
    GammaSource gamma_source = GammaSource::lloyd_max;
};

struct DerivedScalars {
    int Nc;
    double fs;
    double Bw;
    int D0;
    int D;
    double sigma2;
    double rho;
};

// Validates the configuration and returns the derived scalars.
// Throws std::invalid_argument on an inconsistent configuration.
DerivedScalars derive(const SystemConfig& config);

// Soft conditions that do not invalidate a configuration (e.g. Nrf not much
// smaller than M).
std::vector<std::string> config_warnings(const SystemConfig& config);

// Returns a copy of `config` with the subcarrier spacing chosen so that the
// transmission bandwidth K * delta_f equals `bandwidth_hz`.
SystemConfig with_bandwidth(SystemConfig config, double bandwidth_hz);

/// Deterministic random stream keyed by (master_seed, stream_id).
///
/// Two streams built from the same key produce bitwise-equal sequences on a
/// given standard library, independent of when or on which thread they are
/// consumed. Streams with different ids are seeded through std::seed_seq and
/// are statistically independent for simulation purposes.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    double normal();
    double uniform(double lo, double hi);
    // Circularly symmetric CN(0, 1).
    cd complex_normal();

    // Independent child stream identified by `tag`, e.g. one per frame.
    RngStream substream(std::uint64_t tag) const;

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hbrx
