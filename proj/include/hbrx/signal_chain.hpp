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

#include <optional>
#include <utility>
#include <vector>

#include "hbrx/analysis.hpp"
#include "hbrx/channel.hpp"
#include "hbrx/quantizer.hpp"

namespace hbrx {

enum class SymbolPrior { gaussian, qpsk };

struct FrameSymbols {
    CMat freq;  // I x Nc, zero outside the first K subcarriers
    CMat time;  // I x Nc
};

struct ReceivedFrame {
    CMat r_time;  // M x Nc
    CMat z_time;  // Nrf x Nc
    CMat z_freq;  // Nrf x Nc, unitary DFT of z_time
};

// Unit-power symbols on the first K of Nc subcarriers.
CMat draw_symbols(int I, int K, int Nc, SymbolPrior prior, RngStream& rng);

// s_i[n] = sqrt(p / Nc) sum_k s~_i[k] exp(+j 2 pi n k / Nc).
// Throws if any symbol in the oversampling band is nonzero.
FrameSymbols modulate(const CMat& s_freq, int K, double p);

// Unitary DFT along time, z~[k] = (1/sqrt(Nc)) sum_n z[n] exp(-j 2 pi n k / Nc).
CMat unitary_dft(const CMat& time);
CMat unitary_idft(const CMat& freq);

// r[n] = sum_d H[d] s[(n - d) mod Nc] + w[n], w[n] ~ CN(0, sigma_n^2 I), over
// every tap passed in. With beam squint the taps from time_taps do not vanish
// beyond D, so pass all Nc of them to reproduce H~[k] exactly.
CMat propagate(const FrameSymbols& frame, const std::vector<CMat>& taps, double sigma_n, RngStream& rng);

// Analog combining followed by per-chain quantization. Without a quantizer the
// chain is linear (z = Urf^H r).
ReceivedFrame receive_quantized(const CMat& r_time, const CMat& Urf, const ScalarQuantizer* q,
                                std::span<const double> scales);

// Stationary time-domain receive covariance at lag 0,
//   C_r[0] = (p/Nc) sum_{k<K} H~[k] H~[k]^H + sigma_n^2 I.
CMat analytic_rx_covariance(const ChannelRealization& ch, const SystemConfig& config);

// Per-chain RMS of each real dimension at the ADC input: sqrt([Urf^H C_r[0] Urf]_jj / 2).
std::vector<double> quantizer_scales(const CMat& Urf, const CMat& Cr0);

struct QdCovarianceEstimate {
    std::vector<CMat> cov;  // Nc matrices, Nrf x Nrf
    double alpha;           // Bussgang gain used to isolate the distortion
    // Largest |corr(eta~_n[k], r~_m[k])| over (n, m), pooled across data
    // subcarriers and frames.
    double max_cross_correlation;
};

// Monte Carlo covariance of eta~[k] = z~[k] - alpha Urf^H r~[k], with alpha from
// bussgang_alpha_empirical.
QdCovarianceEstimate estimate_qd_covariance_mc(const ChannelRealization& ch, const CMat& Urf, const ScalarQuantizer& q,
                                               const SystemConfig& config, int n_frames, RngStream& rng,
                                               SymbolPrior prior = SymbolPrior::gaussian);

struct SindrEstimate {
    RMat sindr;   // I x K; +inf where the distortion estimate is non-positive
    int flagged;  // number of entries clamped to +inf
};

// Empirical SINDR of the post-combined signal x^_i[k] = u_i[k]^H z~[k]: the
// LMMSE gain g = E[x^ s*]/E|s|^2 and the residual power E|x^|^2 - |g|^2 E|s|^2.
SindrEstimate estimate_sindr_mc(const ChannelRealization& ch, const HybridCombiner& combiner, const ScalarQuantizer* q,
                                const SystemConfig& config, int n_frames, RngStream& rng,
                                SymbolPrior prior = SymbolPrior::gaussian);

}  // namespace hbrx
