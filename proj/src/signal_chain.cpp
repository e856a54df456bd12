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

#include "hbrx/signal_chain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dft.hpp"

namespace hbrx {

namespace {

constexpr long kAlphaSamples = 1'000'000;

}  // namespace

CMat draw_symbols(int I, int K, int Nc, SymbolPrior prior, RngStream& rng) {
    CMat s = CMat::Zero(I, Nc);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < I; ++i) {
            if (prior == SymbolPrior::gaussian) {
                s(i, k) = rng.complex_normal();
            } else {
                const double re = rng.uniform(0.0, 1.0) < 0.5 ? -M_SQRT1_2 : M_SQRT1_2;
                const double im = rng.uniform(0.0, 1.0) < 0.5 ? -M_SQRT1_2 : M_SQRT1_2;
                s(i, k) = {re, im};
            }
        }
    return s;
}

FrameSymbols modulate(const CMat& s_freq, int K, double p) {
    const Eigen::Index Nc = s_freq.cols();
    if (K > Nc) throw std::invalid_argument("modulate: K exceeds the number of subcarriers");
    if (Nc > K && s_freq.rightCols(Nc - K).squaredNorm() != 0.0)
        throw std::invalid_argument("modulate: oversampling band must carry no symbols");
    return {s_freq, detail::idft_rows(s_freq, std::sqrt(p / static_cast<double>(Nc)))};
}

CMat unitary_dft(const CMat& time) { return detail::dft_rows(time, 1.0 / std::sqrt(static_cast<double>(time.cols()))); }

CMat unitary_idft(const CMat& freq) { return detail::idft_rows(freq, 1.0 / std::sqrt(static_cast<double>(freq.cols()))); }

CMat propagate(const FrameSymbols& frame, const std::vector<CMat>& taps, double sigma_n, RngStream& rng) {
    const Eigen::Index Nc = frame.time.cols();
    if (taps.empty()) throw std::invalid_argument("propagate: no channel taps");
    if (static_cast<Eigen::Index>(taps.size()) > Nc) throw std::invalid_argument("propagate: more taps than samples");
    const int D = static_cast<int>(taps.size());
    const Eigen::Index M = taps.front().rows();
    CMat r = CMat::Zero(M, Nc);
    for (int d = 0; d < D; ++d) {
        const CMat P = taps[static_cast<size_t>(d)] * frame.time;
        // r[:, n] += P[:, (n - d) mod Nc]
        r.rightCols(Nc - d) += P.leftCols(Nc - d);
        if (d > 0) r.leftCols(d) += P.rightCols(d);
    }
    if (sigma_n > 0.0)
        for (Eigen::Index n = 0; n < Nc; ++n)
            for (Eigen::Index m = 0; m < M; ++m) r(m, n) += sigma_n * rng.complex_normal();
    return r;
}

ReceivedFrame receive_quantized(const CMat& r_time, const CMat& Urf, const ScalarQuantizer* q,
                                std::span<const double> scales) {
    ReceivedFrame out;
    out.r_time = r_time;
    out.z_time = Urf.adjoint() * r_time;
    if (q != nullptr) {
        if (scales.size() != static_cast<size_t>(Urf.cols())) throw std::invalid_argument("receive_quantized: one scale per RF chain required");
        for (double s : scales)
            if (!(s > 0.0)) throw std::invalid_argument("receive_quantized: scales must be positive");
        for (Eigen::Index n = 0; n < out.z_time.cols(); ++n) out.z_time.col(n) = quantize(out.z_time.col(n), *q, scales);
    }
    out.z_freq = unitary_dft(out.z_time);
    return out;
}

CMat analytic_rx_covariance(const ChannelRealization& ch, const SystemConfig& config) {
    const DerivedScalars d = derive(config);
    const CMat stacked = stacked_data_channel(ch);
    CMat C = (config.p / d.Nc) * (stacked * stacked.adjoint());
    C.diagonal().array() += d.sigma2;
    return C;
}

std::vector<double> quantizer_scales(const CMat& Urf, const CMat& Cr0) {
    const CMat C = Urf.adjoint() * Cr0 * Urf;
    std::vector<double> scales(static_cast<size_t>(C.rows()));
    for (Eigen::Index j = 0; j < C.rows(); ++j) scales[static_cast<size_t>(j)] = std::sqrt(std::real(C(j, j)) / 2.0);
    return scales;
}

QdCovarianceEstimate estimate_qd_covariance_mc(const ChannelRealization& ch, const CMat& Urf, const ScalarQuantizer& q,
                                               const SystemConfig& config, int n_frames, RngStream& rng,
                                               SymbolPrior prior) {
    if (n_frames < 1) throw std::invalid_argument("estimate_qd_covariance_mc: n_frames must be positive");
    const DerivedScalars d = derive(config);
    const int Nc = d.Nc, K = config.K, M = config.M;
    const Eigen::Index Nrf = Urf.cols();
    const std::vector<CMat> taps = time_taps(ch);
    const std::vector<double> scales = quantizer_scales(Urf, analytic_rx_covariance(ch, config));
    RngStream alpha_rng = rng.substream(0);
    const double alpha = bussgang_alpha_empirical(q, kAlphaSamples, alpha_rng);

    QdCovarianceEstimate out;
    out.alpha = alpha;
    out.cov.assign(static_cast<size_t>(Nc), CMat::Zero(Nrf, Nrf));
    CMat cross = CMat::Zero(Nrf, M);
    RVec eta_power = RVec::Zero(Nrf), r_power = RVec::Zero(M);

    for (int f = 0; f < n_frames; ++f) {
        RngStream frame_rng = rng.substream(static_cast<std::uint64_t>(f) + 1);
        const FrameSymbols frame = modulate(draw_symbols(config.I, K, Nc, prior, frame_rng), K, config.p);
        const CMat r = propagate(frame, taps, std::sqrt(d.sigma2), frame_rng);
        const ReceivedFrame rx = receive_quantized(r, Urf, &q, scales);
        const CMat r_freq = unitary_dft(r);
        const CMat eta = rx.z_freq - alpha * (Urf.adjoint() * r_freq);
        for (int k = 0; k < Nc; ++k) out.cov[static_cast<size_t>(k)] += eta.col(k) * eta.col(k).adjoint();
        for (int k = 0; k < K; ++k) {
            cross += eta.col(k) * r_freq.col(k).adjoint();
            eta_power += eta.col(k).cwiseAbs2();
            r_power += r_freq.col(k).cwiseAbs2();
        }
    }
    for (auto& C : out.cov) C /= static_cast<double>(n_frames);

    out.max_cross_correlation = 0.0;
    for (Eigen::Index n = 0; n < Nrf; ++n)
        for (int m = 0; m < M; ++m) {
            const double denom = std::sqrt(eta_power(n) * r_power(m));
            if (denom > 0.0) out.max_cross_correlation = std::max(out.max_cross_correlation, std::abs(cross(n, m)) / denom);
        }
    return out;
}

SindrEstimate estimate_sindr_mc(const ChannelRealization& ch, const HybridCombiner& combiner, const ScalarQuantizer* q,
                                const SystemConfig& config, int n_frames, RngStream& rng, SymbolPrior prior) {
    if (n_frames < 1) throw std::invalid_argument("estimate_sindr_mc: n_frames must be positive");
    if (static_cast<int>(combiner.Ubb.size()) != config.K) throw std::invalid_argument("estimate_sindr_mc: one digital combiner per data subcarrier required");
    const DerivedScalars d = derive(config);
    const int Nc = d.Nc, K = config.K, I = config.I;
    const std::vector<CMat> taps = time_taps(ch);
    const std::vector<double> scales = quantizer_scales(combiner.Urf, analytic_rx_covariance(ch, config));

    CMat cross = CMat::Zero(I, K);
    RMat symbol_power = RMat::Zero(I, K), output_power = RMat::Zero(I, K);
    for (int f = 0; f < n_frames; ++f) {
        RngStream frame_rng = rng.substream(static_cast<std::uint64_t>(f) + 1);
        const FrameSymbols frame = modulate(draw_symbols(I, K, Nc, prior, frame_rng), K, config.p);
        const CMat r = propagate(frame, taps, std::sqrt(d.sigma2), frame_rng);
        const ReceivedFrame rx = receive_quantized(r, combiner.Urf, q, scales);
        for (int k = 0; k < K; ++k) {
            const CVec x = combiner.Ubb[static_cast<size_t>(k)].adjoint() * rx.z_freq.col(k);
            for (int i = 0; i < I; ++i) {
                const cd s = frame.freq(i, k);
                cross(i, k) += x(i) * std::conj(s);
                symbol_power(i, k) += std::norm(s);
                output_power(i, k) += std::norm(x(i));
            }
        }
    }

    SindrEstimate out{RMat::Zero(I, K), 0};
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < I; ++i) {
            const double es = symbol_power(i, k) / n_frames;
            const double ex = output_power(i, k) / n_frames;
            const double gain2 = std::norm(cross(i, k) / symbol_power(i, k));
            const double signal = gain2 * es;
            const double residual = ex - signal;
            // Relative floor: residuals at round-off level of the output power count as zero.
            if (residual <= 1e-12 * ex) {
                out.sindr(i, k) = std::numeric_limits<double>::infinity();
                ++out.flagged;
            } else {
                out.sindr(i, k) = signal / residual;
            }
        }
    return out;
}

}  // namespace hbrx
