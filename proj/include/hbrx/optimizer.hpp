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

#include <functional>
#include <memory>
#include <vector>

#include "hbrx/analysis.hpp"
#include "hbrx/channel.hpp"
#include "hbrx/core.hpp"

namespace hbrx {

// Auxiliary variables of the quadratic-transform reformulation, I x K each.
struct FpAuxState {
    RMat t;
    CMat q;
};

struct PgaParams {
    double nu = 0.1;  // Armijo constant, (0, 0.5)
    double c = 0.5;   // backtracking shrink, (0, 1)
    double eps = 1e-4;
    int max_outer = 200;
    int max_backtrack = 50;

    void validate() const;
};

// Data-band channel quantities reused across every step of one design run.
struct ChannelCache {
    CMat stacked;  // [H~[0], ..., H~[K-1]], M x (K I)
    CMat gram;     // (1/K) sum_k H~[k] H~[k]^H
    int K = 0;
    int I = 0;

    explicit ChannelCache(const ChannelRealization& ch);
    auto H(int k) const { return stacked.middleCols(static_cast<Eigen::Index>(k) * I, I); }
};

/// Terms of the analog-stage objective
///   g(Urf) = 2 Re tr(X Urf^H) - sum_k tr(Z[k] Urf^H Y[k] Urf)
///            - gamma/((1-gamma) beta) sum_k tr(diag(Z[k]) Urf^H H_ Urf)
///            - 1/(rho (1-gamma)) sum_k tr(Z[k] Urf^H Urf),
/// with Y[k] = H~[k] H~[k]^H kept implicit through the channel cache.
struct FpWorkset {
    CMat X;              // M x Nrf
    std::vector<CMat> Z;  // K matrices, Nrf x Nrf
    CMat Z_sum;
    std::shared_ptr<const ChannelCache> channel;

    const CMat& H_under() const { return channel->gram; }
    CMat Y(int k) const;
};

// t_i[k] = SINDR of user i on subcarrier k (zero when u_i[k] = 0).
RMat update_aux_t(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce);

// q_i[k] = sqrt(t+1) u^H Urf^H h_i / (sum_j |u^H Urf^H h_j|^2 + u^H C_e u).
CMat update_aux_q(const ChannelRealization& ch, const HybridCombiner& combiner, const CMat& Ce, const RMat& t);

// f_q = G/(K ln 2) + (1/K) sum log2(1 + t) - (1/(K ln 2)) sum t.
double objective_fq(const ChannelRealization& ch, const HybridCombiner& combiner, const FpAuxState& aux, const CMat& Ce);

// The quadratic-transform term G alone.
double objective_G(const ChannelRealization& ch, const HybridCombiner& combiner, const FpAuxState& aux, const CMat& Ce);

FpWorkset build_workset(const ChannelRealization& ch, const HybridCombiner& combiner, const FpAuxState& aux);
FpWorkset build_workset(std::shared_ptr<const ChannelCache> cache, const HybridCombiner& combiner, const FpAuxState& aux);

double evaluate_g(const CMat& Urf, const FpWorkset& ws, double gamma, double beta, double rho);

// Gradient in the 2 dg/dUrf^* convention: its real and imaginary parts are the
// partial derivatives of g along Re Urf and Im Urf.
CMat gradient_g(const CMat& Urf, const FpWorkset& ws, double gamma, double beta, double rho);

// Entrywise projection onto |Urf(m, n)| = 1/sqrt(M), keeping the phase.
CMat project_constant_modulus(const CMat& A);

struct PgaResult {
    CMat Urf;
    int iterations = 0;
    double mu_accepted = 0.0;  // step of the last accepted move
    bool stalled = false;      // backtracking exhausted before the stopping rule
    std::vector<double> g_trace;
};

// Projected gradient ascent with a normalized gradient and Armijo backtracking.
// Optional `gradient` replaces gradient_g (used for negative controls).
using GradientFn = std::function<CMat(const CMat&)>;
PgaResult pga_analog(const CMat& Urf0, const FpWorkset& ws, const PgaParams& params, double gamma, double beta,
                     double rho, const GradientFn& gradient = {});

struct DigitalUpdate {
    std::vector<CMat> Ubb;
    int floored = 0;  // (i, k) where |q_i[k]| hit the 1e-12 floor
};

// u_i[k] = xi_i[k] (Urf^H Y[k] Urf + C_e)^{-1} Urf^H h_i[k], xi = q^* sqrt(t+1) / |q|^2.
DigitalUpdate digital_closed_form(const ChannelRealization& ch, const CMat& Urf, const FpAuxState& aux, const CMat& Ce);

// Phases of the Nrf dominant eigenvectors of H_, scaled to modulus 1/sqrt(M).
CMat init_analog_svd(const ChannelRealization& ch, int Nrf);
CMat init_analog_svd(const CMat& H_under, int Nrf);

// u_i[k] = alpha sqrt(p) J[k]^{-1} Urf^H h_i[k], J[k] = alpha^2 p (Urf^H Y[k] Urf + C_e).
std::vector<CMat> init_digital_mmse(const ChannelRealization& ch, const CMat& Urf, const CMat& Ce, double alpha, double p);
std::vector<CMat> init_digital_mmse(const ChannelRealization& ch, const CMat& Urf, double gamma, const SystemConfig& config);

struct IterationRecord {
    int iteration = 0;
    double f_q = 0.0;  // after the digital update
    double R = 0.0;    // spectral efficiency at the end of the iteration
    int pga_iterations = 0;
    double mu_accepted = 0.0;
    bool pga_stalled = false;
};

// f_q right after each block update, in execution order. The auxiliary pair
// (t, q) is one block.
struct StepRecord {
    enum class Step { aux, analog, digital } step;
    int iteration;
    double f_q;
};

struct DesignOptions {
    PgaParams pga;
    double tol_outer = 1e-3;
    int max_iter_outer = 50;
    bool record_steps = false;
    std::function<void(const IterationRecord&)> on_iteration;
};

struct DesignResult {
    HybridCombiner combiner;
    std::vector<double> se_trace;  // entry 0 is the initialization
    std::vector<IterationRecord> iterations;
    std::vector<StepRecord> steps;
    std::vector<CMat> analog_iterates;  // every Urf produced, including the initialization
    double se = 0.0;
    int digital_floored = 0;
    bool any_pga_stalled = false;
};

DesignResult design_hybrid(const ChannelRealization& ch, const SystemConfig& config, const DesignOptions& opts = {});

// SVD analog initialization with the MMSE digital combiner, no refinement.
DesignResult design_svd_hybrid(const ChannelRealization& ch, const SystemConfig& config);

struct DigitalDesign {
    std::vector<CMat> W;  // M x I per data subcarrier
    RMat zeta;
    double se = 0.0;
};

// Fully digital receiver: Urf = I_M with the same QD model and the MMSE combiner.
DigitalDesign design_fully_digital_mmse(const ChannelRealization& ch, const SystemConfig& config);

}  // namespace hbrx
