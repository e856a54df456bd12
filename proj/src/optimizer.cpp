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

#include "hbrx/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "hbrx/quantizer.hpp"

namespace hbrx {

namespace {

constexpr double kQFloor = 1e-12;

std::vector<CMat> split_blocks(const CMat& stacked, int K, int I) {
    std::vector<CMat> out(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) out[static_cast<size_t>(k)] = stacked.middleCols(static_cast<Eigen::Index>(k) * I, I);
    return out;
}

// Per-(i, k) scalars shared by the SINDR, the auxiliary updates and G:
// desired[i,k] = u_i^H b_i, total[i,k] = sum_j |u_i^H b_j|^2 + u_i^H C_e u_i.
struct Projection {
    CMat desired;
    RMat total;
    RMat zero;  // 1 where u_i[k] = 0
};

Projection project(const std::vector<CMat>& B, const std::vector<CMat>& Ubb, const CMat& Ce) {
    if (B.size() != Ubb.size()) throw std::invalid_argument("one digital combiner per data subcarrier required");
    const int K = static_cast<int>(B.size());
    const int I = K > 0 ? static_cast<int>(B.front().cols()) : 0;
    Projection p{CMat::Zero(I, K), RMat::Zero(I, K), RMat::Zero(I, K)};
    for (int k = 0; k < K; ++k) {
        const CMat& U = Ubb[static_cast<size_t>(k)];
        const CMat A = U.adjoint() * B[static_cast<size_t>(k)];
        const CMat CeU = Ce * U;
        for (int i = 0; i < I; ++i) {
            p.desired(i, k) = A(i, i);
            p.total(i, k) = A.row(i).squaredNorm() + std::real(U.col(i).dot(CeU.col(i)));
            p.zero(i, k) = U.col(i).squaredNorm() == 0.0 ? 1.0 : 0.0;
        }
    }
    return p;
}

RMat aux_t(const Projection& p) {
    RMat t = RMat::Zero(p.desired.rows(), p.desired.cols());
    for (Eigen::Index k = 0; k < t.cols(); ++k)
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            if (p.zero(i, k) != 0.0) continue;
            const double s = std::norm(p.desired(i, k));
            t(i, k) = s / (p.total(i, k) - s);
        }
    return t;
}

CMat aux_q(const Projection& p, const RMat& t) {
    CMat q(p.desired.rows(), p.desired.cols());
    for (Eigen::Index k = 0; k < q.cols(); ++k)
        for (Eigen::Index i = 0; i < q.rows(); ++i) {
            if (!(p.total(i, k) > 0.0)) throw std::domain_error("update_aux_q: zero denominator");
            q(i, k) = std::sqrt(t(i, k) + 1.0) * p.desired(i, k) / p.total(i, k);
        }
    return q;
}

double G_of(const Projection& p, const FpAuxState& aux) {
    double G = 0.0;
    for (Eigen::Index k = 0; k < p.desired.cols(); ++k)
        for (Eigen::Index i = 0; i < p.desired.rows(); ++i) {
            const cd q = aux.q(i, k);
            G += 2.0 * std::sqrt(aux.t(i, k) + 1.0) * std::real(std::conj(q) * p.desired(i, k)) - std::norm(q) * p.total(i, k);
        }
    return G;
}

double fq_of(const Projection& p, const FpAuxState& aux) {
    const double K = static_cast<double>(aux.t.cols());
    double log_sum = 0.0, t_sum = 0.0;
    for (Eigen::Index k = 0; k < aux.t.cols(); ++k)
        for (Eigen::Index i = 0; i < aux.t.rows(); ++i) {
            log_sum += std::log2(1.0 + aux.t(i, k));
            t_sum += aux.t(i, k);
        }
    return G_of(p, aux) / (K * M_LN2) + log_sum / K - t_sum / (K * M_LN2);
}

// Effective channels and effective noise for an analog combiner, from the cache.
struct AnalogState {
    std::vector<CMat> B;
    EffectiveNoise noise;
};

AnalogState analog_state(const ChannelCache& cache, const CMat& Urf, const DistortionParams& dp) {
    const CMat UhS = Urf.adjoint() * cache.stacked;
    const RVec he = UhS.rowwise().squaredNorm() / static_cast<double>(cache.K);
    return {split_blocks(UhS, cache.K, cache.I), effective_noise_from_he(Urf, he, dp.gamma, dp.beta, dp.rho)};
}

std::vector<CMat> mmse_from_effective(const std::vector<CMat>& B, const CMat& Ce, double alpha, double p) {
    std::vector<CMat> Ubb(B.size());
    const double scale = 1.0 / (alpha * std::sqrt(p));  // alpha sqrt(p) / (alpha^2 p)
    for (size_t k = 0; k < B.size(); ++k) {
        const CMat J = B[k] * B[k].adjoint() + Ce;
        Ubb[k] = scale * J.llt().solve(B[k]);
    }
    return Ubb;
}

DigitalUpdate digital_from_effective(const std::vector<CMat>& B, const CMat& Ce, const FpAuxState& aux) {
    DigitalUpdate out;
    out.Ubb.resize(B.size());
    for (size_t k = 0; k < B.size(); ++k) {
        const CMat A = B[k] * B[k].adjoint() + Ce;
        CMat X = A.llt().solve(B[k]);
        for (Eigen::Index i = 0; i < X.cols(); ++i) {
            cd q = aux.q(i, static_cast<Eigen::Index>(k));
            if (std::abs(q) < kQFloor) {
                q = (q == cd{0.0, 0.0}) ? cd{kQFloor, 0.0} : kQFloor * q / std::abs(q);
                ++out.floored;
            }
            X.col(i) *= std::conj(q) * std::sqrt(aux.t(i, static_cast<Eigen::Index>(k)) + 1.0) / std::norm(q);
        }
        out.Ubb[k] = std::move(X);
    }
    return out;
}

}  // namespace

void PgaParams::validate() const {
    if (!(nu > 0.0 && nu < 0.5)) throw std::invalid_argument("PgaParams: nu must lie in (0, 0.5)");
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("PgaParams: c must lie in (0, 1)");
    if (!(eps >= 0.0)) throw std::invalid_argument("PgaParams: eps must be non-negative");
    if (max_outer < 1 || max_backtrack < 1) throw std::invalid_argument("PgaParams: iteration caps must be positive");
}

ChannelCache::ChannelCache(const ChannelRealization& ch)
    : stacked(stacked_data_channel(ch)), gram(average_channel_gram(ch)), K(ch.K), I(ch.I()) {}

CMat FpWorkset::Y(int k) const {
    const auto H = channel->H(k);
    return H * H.adjoint();
}

RMat update_aux_t(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce) {
    return aux_t(project(effective_channels(ch, combiner.Urf), combiner.Ubb, Ce));
}

CMat update_aux_q(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce, const RMat& t) {
    return aux_q(project(effective_channels(ch, combiner.Urf), combiner.Ubb, Ce), t);
}

double objective_G(const ChannelRealization& ch, const HybridCombiner& combiner, const FpAuxState& aux, const CMat& Ce) {
    return G_of(project(effective_channels(ch, combiner.Urf), combiner.Ubb, Ce), aux);
}

double objective_fq(const ChannelRealization& ch, const HybridCombiner& combiner, const FpAuxState& aux, const CMat& Ce) {
    return fq_of(project(effective_channels(ch, combiner.Urf), combiner.Ubb, Ce), aux);
}

FpWorkset build_workset(std::shared_ptr<const ChannelCache> cache, const HybridCombiner& combiner, const FpAuxState& aux) {
    const int K = cache->K, I = cache->I;
    const Eigen::Index M = cache->stacked.rows(), Nrf = combiner.Urf.cols();
    FpWorkset ws;
    ws.X = CMat::Zero(M, Nrf);
    ws.Z.assign(static_cast<size_t>(K), CMat::Zero(Nrf, Nrf));
    ws.Z_sum = CMat::Zero(Nrf, Nrf);
    // X = H_stacked * C with C stacking sqrt(t+1) q^* u^H per (k, i).
    CMat coeff(static_cast<Eigen::Index>(K) * I, Nrf);
    for (int k = 0; k < K; ++k) {
        const CMat& U = combiner.Ubb[static_cast<size_t>(k)];
        for (int i = 0; i < I; ++i) {
            const cd w = std::sqrt(aux.t(i, k) + 1.0) * std::conj(aux.q(i, k));
            coeff.row(static_cast<Eigen::Index>(k) * I + i) = w * U.col(i).adjoint();
            ws.Z[static_cast<size_t>(k)] += std::norm(aux.q(i, k)) * (U.col(i) * U.col(i).adjoint());
        }
        ws.Z_sum += ws.Z[static_cast<size_t>(k)];
    }
    ws.X = cache->stacked * coeff;
    ws.channel = std::move(cache);
    return ws;
}

FpWorkset build_workset(const ChannelRealization& ch, const HybridCombiner& combiner, const FpAuxState& aux) {
    return build_workset(std::make_shared<const ChannelCache>(ch), combiner, aux);
}

double evaluate_g(const CMat& Urf, const FpWorkset& ws, double gamma, double beta, double rho) {
    const ChannelCache& cache = *ws.channel;
    const double c_qd = gamma / ((1.0 - gamma) * beta);
    const double c_awgn = 1.0 / (rho * (1.0 - gamma));

    const double linear = 2.0 * std::real((Urf.conjugate().cwiseProduct(ws.X)).sum());
    // W = H_stacked^H Urf, block k is (Urf^H H~[k])^H.
    const CMat W = cache.stacked.adjoint() * Urf;
    double channel_term = 0.0;
    for (int k = 0; k < cache.K; ++k) {
        const auto Wk = W.middleRows(static_cast<Eigen::Index>(k) * cache.I, cache.I);
        // tr(Z U^H Y U) = tr(Wk Z Wk^H)
        channel_term += std::real((Wk * ws.Z[static_cast<size_t>(k)]).cwiseProduct(Wk.conjugate()).sum());
    }
    const CMat GU = cache.gram * Urf;
    double qd_term = 0.0;
    for (Eigen::Index n = 0; n < Urf.cols(); ++n) qd_term += std::real(ws.Z_sum(n, n)) * std::real(Urf.col(n).dot(GU.col(n)));
    const double awgn_term = std::real((ws.Z_sum.cwiseProduct((Urf.adjoint() * Urf).transpose())).sum());
    return linear - channel_term - c_qd * qd_term - c_awgn * awgn_term;
}

CMat gradient_g(const CMat& Urf, const FpWorkset& ws, double gamma, double beta, double rho) {
    const ChannelCache& cache = *ws.channel;
    const double c_qd = gamma / ((1.0 - gamma) * beta);
    const double c_awgn = 1.0 / (rho * (1.0 - gamma));

    CMat W = cache.stacked.adjoint() * Urf;
    for (int k = 0; k < cache.K; ++k) {
        auto Wk = W.middleRows(static_cast<Eigen::Index>(k) * cache.I, cache.I);
        Wk = (Wk * ws.Z[static_cast<size_t>(k)]).eval();
    }
    const CMat channel_term = cache.stacked * W;  // sum_k Y[k] Urf Z[k]
    const CVec z_diag = ws.Z_sum.diagonal().real().cast<cd>();
    return 2.0 * ws.X - (2.0 * c_awgn) * (Urf * ws.Z_sum) - (2.0 * c_qd) * ((cache.gram * Urf) * z_diag.asDiagonal()) -
           2.0 * channel_term;
}

CMat project_constant_modulus(const CMat& A) {
    const double modulus = 1.0 / std::sqrt(static_cast<double>(A.rows()));
    CMat out(A.rows(), A.cols());
    for (Eigen::Index c = 0; c < A.cols(); ++c)
        for (Eigen::Index r = 0; r < A.rows(); ++r) {
            const cd a = A(r, c);
            out(r, c) = std::polar(modulus, a == cd{0.0, 0.0} ? 0.0 : std::arg(a));
        }
    return out;
}

PgaResult pga_analog(const CMat& Urf0, const FpWorkset& ws, const PgaParams& params, double gamma, double beta,
                     double rho, const GradientFn& gradient) {
    params.validate();
    PgaResult res;
    res.Urf = project_constant_modulus(Urf0);
    double g = evaluate_g(res.Urf, ws, gamma, beta, rho);
    res.g_trace.push_back(g);
    for (int it = 0; it < params.max_outer; ++it) {
        const CMat grad = gradient ? gradient(res.Urf) : gradient_g(res.Urf, ws, gamma, beta, rho);
        const double norm = grad.norm();
        if (!(norm > 0.0)) break;
        const CMat direction = grad / norm;

        double mu = 1.0;
        bool accepted = false;
        CMat candidate;
        double g_candidate = g;
        for (int bt = 0; bt < params.max_backtrack; ++bt) {
            candidate = project_constant_modulus(res.Urf + mu * direction);
            g_candidate = evaluate_g(candidate, ws, gamma, beta, rho);
            // ||direction||_F = 1
            if (g_candidate > g + params.nu * mu) {
                accepted = true;
                break;
            }
            mu *= params.c;
        }
        if (!accepted) {
            res.stalled = true;
            break;
        }
        const double change = g_candidate - g;
        res.Urf = std::move(candidate);
        g = g_candidate;
        res.g_trace.push_back(g);
        res.mu_accepted = mu;
        ++res.iterations;
        if (std::abs(change) <= params.eps) break;
    }
    return res;
}

DigitalUpdate digital_closed_form(const ChannelRealization& ch, const CMat& Urf, const FpAuxState& aux, const CMat& Ce) {
    return digital_from_effective(effective_channels(ch, Urf), Ce, aux);
}

CMat init_analog_svd(const CMat& H_under, int Nrf) {
    const Eigen::Index M = H_under.rows();
    if (Nrf < 1 || Nrf > M) throw std::invalid_argument("init_analog_svd: Nrf must lie in [1, M]");
    const Eigen::SelfAdjointEigenSolver<CMat> eig(H_under);
    if (eig.info() != Eigen::Success) throw std::runtime_error("init_analog_svd: eigendecomposition failed");
    CMat V(M, Nrf);
    for (int n = 0; n < Nrf; ++n) {
        CVec v = eig.eigenvectors().col(M - 1 - n);  // eigenvalues ascend
        // Fix the phase ambiguity: first non-negligible entry real positive.
        const double threshold = 1e-12 * v.cwiseAbs().maxCoeff();
        for (Eigen::Index m = 0; m < M; ++m)
            if (std::abs(v(m)) > threshold) {
                v *= std::conj(v(m)) / std::abs(v(m));
                break;
            }
        V.col(n) = v;
    }
    return project_constant_modulus(V);
}

CMat init_analog_svd(const ChannelRealization& ch, int Nrf) { return init_analog_svd(average_channel_gram(ch), Nrf); }

std::vector<CMat> init_digital_mmse(const ChannelRealization& ch, const CMat& Urf, const CMat& Ce, double alpha, double p) {
    return mmse_from_effective(effective_channels(ch, Urf), Ce, alpha, p);
}

std::vector<CMat> init_digital_mmse(const ChannelRealization& ch, const CMat& Urf, double gamma, const SystemConfig& config) {
    const DerivedScalars d = derive(config);
    const EffectiveNoise noise = effective_noise_cov(ch, Urf, gamma, config.beta, d.rho);
    return init_digital_mmse(ch, Urf, noise.Ce, 1.0 - gamma, config.p);
}

DesignResult design_svd_hybrid(const ChannelRealization& ch, const SystemConfig& config) {
    const DistortionParams dp = distortion_params(config);
    const ChannelCache cache(ch);
    DesignResult res;
    res.combiner.Urf = init_analog_svd(cache.gram, config.Nrf);
    const AnalogState st = analog_state(cache, res.combiner.Urf, dp);
    res.combiner.Ubb = mmse_from_effective(st.B, st.noise.Ce, 1.0 - dp.gamma, dp.p);
    res.se = spectral_efficiency(sindr_effective(st.B, res.combiner.Ubb, st.noise.Ce).zeta);
    res.se_trace.push_back(res.se);
    res.analog_iterates.push_back(res.combiner.Urf);
    return res;
}

DesignResult design_hybrid(const ChannelRealization& ch, const SystemConfig& config, const DesignOptions& opts) {
    opts.pga.validate();
    const DistortionParams dp = distortion_params(config);
    const auto cache = std::make_shared<const ChannelCache>(ch);

    DesignResult res;
    CMat Urf = init_analog_svd(cache->gram, config.Nrf);
    AnalogState st = analog_state(*cache, Urf, dp);
    std::vector<CMat> Ubb = mmse_from_effective(st.B, st.noise.Ce, 1.0 - dp.gamma, dp.p);
    res.analog_iterates.push_back(Urf);
    double R = spectral_efficiency(sindr_effective(st.B, Ubb, st.noise.Ce).zeta);
    res.se_trace.push_back(R);

    auto record = [&](StepRecord::Step step, int iteration, const Projection& p, const FpAuxState& aux) {
        if (opts.record_steps) res.steps.push_back({step, iteration, fq_of(p, aux)});
    };

    FpAuxState aux;
    double fq_prev = R;  // f_q at optimal auxiliaries equals R
    for (int it = 1; it <= opts.max_iter_outer; ++it) {
        // t and q are refreshed together: the pair is the joint maximizer of f_q
        // for the current combiners, while t alone against a stale q is not.
        Projection p = project(st.B, Ubb, st.noise.Ce);
        aux.t = aux_t(p);
        aux.q = aux_q(p, aux.t);
        record(StepRecord::Step::aux, it, p, aux);

        const FpWorkset ws = build_workset(cache, HybridCombiner{Urf, Ubb}, aux);
        const PgaResult pga = pga_analog(Urf, ws, opts.pga, dp.gamma, dp.beta, dp.rho);
        Urf = pga.Urf;
        res.analog_iterates.push_back(Urf);
        res.any_pga_stalled = res.any_pga_stalled || pga.stalled;
        st = analog_state(*cache, Urf, dp);
        if (opts.record_steps) record(StepRecord::Step::analog, it, project(st.B, Ubb, st.noise.Ce), aux);

        DigitalUpdate dig = digital_from_effective(st.B, st.noise.Ce, aux);
        Ubb = std::move(dig.Ubb);
        res.digital_floored += dig.floored;
        p = project(st.B, Ubb, st.noise.Ce);
        const double fq = fq_of(p, aux);
        record(StepRecord::Step::digital, it, p, aux);

        R = spectral_efficiency(sindr_effective(st.B, Ubb, st.noise.Ce).zeta);
        res.se_trace.push_back(R);
        IterationRecord rec{it, fq, R, pga.iterations, pga.mu_accepted, pga.stalled};
        res.iterations.push_back(rec);
        if (opts.on_iteration) opts.on_iteration(rec);
        const bool converged = std::abs(fq - fq_prev) <= opts.tol_outer * std::abs(fq_prev);
        fq_prev = fq;
        if (converged) break;
    }
    res.combiner = HybridCombiner{std::move(Urf), std::move(Ubb)};
    res.se = R;
    return res;
}

DigitalDesign design_fully_digital_mmse(const ChannelRealization& ch, const SystemConfig& config) {
    const DistortionParams dp = distortion_params(config);
    const int K = ch.K, I = ch.I();
    const double alpha = 1.0 - dp.gamma;

    // With Urf = I the effective noise is diagonal:
    // c_m = gamma/((1-gamma) beta) [H_]_mm + 1/(rho (1-gamma)).
    const CMat stacked = stacked_data_channel(ch);
    const RVec h_diag = stacked.rowwise().squaredNorm() / static_cast<double>(K);
    const RVec ce = (dp.gamma / (alpha * dp.beta)) * h_diag.array() + 1.0 / (dp.rho * alpha);
    const RVec ce_inv = ce.cwiseInverse();

    DigitalDesign out;
    out.W.resize(static_cast<size_t>(K));
    out.zeta = RMat::Zero(I, K);
    const double scale = 1.0 / (alpha * std::sqrt(dp.p));
    for (int k = 0; k < K; ++k) {
        const CMat& H = ch.freq[static_cast<size_t>(k)];
        // (H H^H + C_e)^{-1} H = C_e^{-1} H (I + H^H C_e^{-1} H)^{-1}
        const CMat CinvH = ce_inv.cast<cd>().asDiagonal() * H;
        const CMat small = CMat::Identity(I, I) + H.adjoint() * CinvH;
        const CMat W = scale * (CinvH * small.llt().solve(CMat::Identity(I, I)));
        const CMat A = W.adjoint() * H;
        for (int i = 0; i < I; ++i) {
            const double noise = (W.col(i).cwiseAbs2().cwiseProduct(ce)).sum();
            const double signal = std::norm(A(i, i));
            out.zeta(i, k) = signal / (A.row(i).squaredNorm() - signal + noise);
        }
        out.W[static_cast<size_t>(k)] = W;
    }
    out.se = spectral_efficiency(out.zeta);
    return out;
}

}  // namespace hbrx
