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

#include "hbrx/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "hbrx/quantizer.hpp"

namespace hbrx {

bool is_constant_modulus(const CMat& Urf, double tol) {
    const double target = 1.0 / std::sqrt(static_cast<double>(Urf.rows()));
    for (Eigen::Index c = 0; c < Urf.cols(); ++c)
        for (Eigen::Index r = 0; r < Urf.rows(); ++r)
            if (std::abs(std::abs(Urf(r, c)) - target) > tol) return false;
    return true;
}

double distortion_factor(const SystemConfig& config) {
    return config.gamma_source == GammaSource::fit ? gamma_fit(config.b) : lloyd_max_cached(config.b).gamma;
}

DistortionParams distortion_params(const SystemConfig& config) {
    const DerivedScalars d = derive(config);
    return {distortion_factor(config), static_cast<double>(config.beta), d.rho, config.p};
}

std::vector<CMat> effective_channels(const ChannelRealization& ch, const CMat& Urf) {
    const CMat stacked = Urf.adjoint() * stacked_data_channel(ch);
    const int I = ch.I();
    std::vector<CMat> B(static_cast<size_t>(ch.K));
    for (int k = 0; k < ch.K; ++k) B[static_cast<size_t>(k)] = stacked.middleCols(static_cast<Eigen::Index>(k) * I, I);
    return B;
}

namespace {

// sum_{k<K} diag(Urf^H H~[k] H~[k]^H Urf) as a vector.
RVec beamformed_power(const ChannelRealization& ch, const CMat& Urf) {
    const CMat stacked = Urf.adjoint() * stacked_data_channel(ch);
    return stacked.rowwise().squaredNorm();
}

}  // namespace

CMat qd_covariance_closed_form(const ChannelRealization& ch, const CMat& Urf, double gamma, const SystemConfig& config) {
    const DerivedScalars d = derive(config);
    const RVec power = beamformed_power(ch, Urf);
    CMat C = d.sigma2 * (Urf.adjoint() * Urf);
    C.diagonal() += (config.p / d.Nc) * power.cast<cd>();
    return gamma * (1.0 - gamma) * C;
}

EffectiveNoise effective_noise_from_he(const CMat& Urf, const RVec& he_diag, double gamma, double beta, double rho) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("effective_noise_cov: gamma must lie in [0, 1)");
    if (!(rho > 0.0)) throw std::invalid_argument("effective_noise_cov: rho must be positive");
    EffectiveNoise out;
    out.gamma = gamma;
    out.beta = beta;
    out.rho = rho;
    out.He = he_diag.cast<cd>().asDiagonal();
    out.Ce = (1.0 / (rho * (1.0 - gamma))) * (Urf.adjoint() * Urf);
    out.Ce.diagonal() += (gamma / ((1.0 - gamma) * beta)) * he_diag.cast<cd>();
    return out;
}

EffectiveNoise effective_noise_cov(const ChannelRealization& ch, const CMat& Urf, double gamma, double beta, double rho) {
    const RVec he = beamformed_power(ch, Urf) / static_cast<double>(ch.K);
    return effective_noise_from_he(Urf, he, gamma, beta, rho);
}

SindrMap sindr_effective(const std::vector<CMat>& B, const std::vector<CMat>& Ubb, const CMat& Ce) {
    if (B.size() != Ubb.size()) throw std::invalid_argument("sindr: one digital combiner per data subcarrier required");
    const int K = static_cast<int>(B.size());
    const int I = K > 0 ? static_cast<int>(B.front().cols()) : 0;
    SindrMap out{RMat::Zero(I, K), 0};
    for (int k = 0; k < K; ++k) {
        const CMat& U = Ubb[static_cast<size_t>(k)];
        const CMat A = U.adjoint() * B[static_cast<size_t>(k)];  // A(i, j) = u_i^H b_j
        const CMat CeU = Ce * U;
        for (int i = 0; i < I; ++i) {
            if (U.col(i).squaredNorm() == 0.0) {
                ++out.zero_combiners;
                continue;
            }
            const double noise = std::real(U.col(i).dot(CeU.col(i)));
            const double signal = std::norm(A(i, i));
            const double interference = A.row(i).squaredNorm() - signal;
            out.zeta(i, k) = signal / (interference + noise);
        }
    }
    return out;
}

SindrMap sindr(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce) {
    return sindr_effective(effective_channels(ch, combiner.Urf), combiner.Ubb, Ce);
}

SindrMap sindr_with_distortion(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce_k,
                               double alpha, double p) {
    const int I = ch.I();
    SindrMap out{RMat::Zero(I, ch.K), 0};
    const double gain = p * alpha * alpha;
    for (int k = 0; k < ch.K; ++k) {
        const CMat& U = combiner.Ubb[static_cast<size_t>(k)];
        const CMat& H = ch.freq[static_cast<size_t>(k)];
        for (int i = 0; i < I; ++i) {
            const CVec w = combiner.Urf * U.col(i);
            if (w.squaredNorm() == 0.0) {
                ++out.zero_combiners;
                continue;
            }
            double interference = 0.0;
            for (int j = 0; j < I; ++j)
                if (j != i) interference += gain * std::norm(w.dot(H.col(j)));
            const double noise = std::real(U.col(i).dot(Ce_k * U.col(i)));
            out.zeta(i, k) = gain * std::norm(w.dot(H.col(i))) / (interference + noise);
        }
    }
    return out;
}

double spectral_efficiency(const RMat& zeta) {
    if (zeta.cols() == 0) return 0.0;
    double total = 0.0;
    for (Eigen::Index k = 0; k < zeta.cols(); ++k)
        for (Eigen::Index i = 0; i < zeta.rows(); ++i) {
            if (zeta(i, k) < 0.0) throw std::invalid_argument("spectral_efficiency: SINDR must be non-negative");
            total += std::log2(1.0 + zeta(i, k));
        }
    return total / static_cast<double>(zeta.cols());
}

}  // namespace hbrx
