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

#include "hbrx/channel.hpp"
#include "hbrx/core.hpp"

namespace hbrx {

// Frequency-flat analog combiner (M x Nrf, entries of modulus 1/sqrt(M)) and
// one Nrf x I digital combiner per data subcarrier.
struct HybridCombiner {
    CMat Urf;
    std::vector<CMat> Ubb;
};

bool is_constant_modulus(const CMat& Urf, double tol = 1e-9);

// Scalars that enter the effective-noise model.
struct DistortionParams {
    double gamma;  // quantizer distortion factor
    double beta;   // oversampling ratio
    double rho;    // linear SNR p / sigma_n^2
    double p;
};

// gamma from the configured source (exact Lloyd-Max or the fit).
double distortion_factor(const SystemConfig& config);
DistortionParams distortion_params(const SystemConfig& config);

// Frequency-domain QD covariance, constant over the data subcarriers:
//   gamma (1 - gamma) [ (p/Nc) sum_{k<K} diag(Urf^H H~[k] H~[k]^H Urf) + sigma_n^2 Urf^H Urf ].
CMat qd_covariance_closed_form(const ChannelRealization& ch, const CMat& Urf, double gamma, const SystemConfig& config);

struct EffectiveNoise {
    CMat Ce;  // Nrf x Nrf, Hermitian positive definite
    CMat He;  // diagonal, (1/K) sum_k diag(Urf^H H~[k] H~[k]^H Urf)
    double gamma;
    double beta;
    double rho;
};

// Normalized effective noise C_e = gamma/((1-gamma) beta) H_e + 1/(rho (1-gamma)) Urf^H Urf.
EffectiveNoise effective_noise_cov(const ChannelRealization& ch, const CMat& Urf, double gamma, double beta, double rho);

// Same as above with H_e supplied directly; used where H_e is already known.
EffectiveNoise effective_noise_from_he(const CMat& Urf, const RVec& he_diag, double gamma, double beta, double rho);

struct SindrMap {
    RMat zeta;           // I x K
    int zero_combiners;  // count of (i, k) with u_i[k] = 0, reported as zeta = 0
};

// Per-user, per-subcarrier SINDR on the normalized effective-noise scale.
SindrMap sindr(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce);

// SINDR from effective channels B[k] = Urf^H H~[k] (or H~[k] for a fully
// digital receiver) and the matching digital combiners.
SindrMap sindr_effective(const std::vector<CMat>& B, const std::vector<CMat>& Ubb, const CMat& Ce);

// Unnormalized form with an explicit Bussgang gain:
//   p a^2 |u^H Urf^H h_i|^2 / (p a^2 sum_{j != i} |u^H Urf^H h_j|^2 + u^H C_e[k] u),
// where C_e[k] = C_qd + a^2 sigma_n^2 Urf^H Urf is the AWGN-plus-QD covariance.
SindrMap sindr_with_distortion(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce_k,
                               double alpha, double p);

// R = (1/K) sum_k sum_i log2(1 + zeta_i[k]).
double spectral_efficiency(const RMat& zeta);

// B[k] = Urf^H H~[k] for the data subcarriers.
std::vector<CMat> effective_channels(const ChannelRealization& ch, const CMat& Urf);

}  // namespace hbrx
