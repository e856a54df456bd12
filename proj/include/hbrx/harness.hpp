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

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbrx/core.hpp"
#include "hbrx/optimizer.hpp"
#include "hbrx/power.hpp"

namespace hbrx {

enum class SweepKind { snr, bandwidth, osr, ee_grid, validate };
enum class Receiver { proposed_hybrid, svd_hybrid, digital_mmse };

std::string to_string(SweepKind kind);
std::string to_string(Receiver receiver);
SweepKind sweep_kind_from_string(const std::string& s);
Receiver receiver_from_string(const std::string& s);

// Receiver label of the Monte Carlo rows added when mc_oracle is on.
inline constexpr const char* kMcOracleReceiver = "proposed_hybrid_mc";

/// One Monte Carlo experiment.
///
/// `values` holds the swept quantity: SNR in dB, bandwidth K * delta_f in Hz,
/// or the oversampling ratio (osr and ee_grid). `bits` lists ADC resolutions
/// evaluated at every point; empty means the configuration's b.
struct SweepSpec {
    SweepKind kind = SweepKind::snr;
    std::vector<double> values;
    std::vector<int> bits;
    std::vector<Receiver> receivers{Receiver::proposed_hybrid, Receiver::svd_hybrid, Receiver::digital_mmse};
    int n_realizations = 10;
    std::uint64_t master_seed = 1;
    bool mc_oracle = false;
    int mc_frames = 200;

    void validate() const;
};

struct ResultRow {
    std::string sweep_kind;
    double sweep_value = 0.0;
    std::string receiver;
    int b = 0;
    int beta = 0;
    double se_mean = 0.0;    // bit/s/Hz
    double se_stderr = 0.0;  // sample std / sqrt(n)
    double ee = 0.0;         // bit/s/Hz/W, or bit/J when requested
    int n_realizations = 0;
    double wall_time_s = 0.0;  // mean design + evaluation time per realization
    double iterations_mean = 0.0;

    bool operator==(const ResultRow&) const = default;
};

// Per-realization outcome, kept for paired comparisons.
struct RealizationSample {
    double sweep_value;
    int b;
    int beta;
    std::string receiver;
    int realization;
    double se;
    int iterations;
};

struct RealizationFailure {
    double sweep_value;
    int realization;
    std::uint64_t master_seed;
    std::string what;
};

struct SweepOptions {
    int workers = 1;
    // Measure wall time. Off by default so that reruns are bitwise identical.
    bool timing = false;
    bool ee_bits_per_joule = false;
    DesignOptions design;
    // Called from worker threads after each realization; must be thread safe.
    std::function<void(const RealizationSample&)> on_sample;
    // Outer iterations of the proposed design, tagged with the realization
    // (se and iterations of the tag are unset). Same threading rule.
    std::function<void(const RealizationSample&, const IterationRecord&)> on_iteration;
};

struct SweepResult {
    std::vector<ResultRow> rows;
    std::vector<RealizationSample> samples;
    std::vector<RealizationFailure> failures;
};

class SweepAborted : public std::runtime_error {
public:
    SweepAborted(const std::string& what, std::vector<RealizationFailure> failures)
        : std::runtime_error(what), failures_(std::move(failures)) {}
    const std::vector<RealizationFailure>& failures() const { return failures_; }

private:
    std::vector<RealizationFailure> failures_;
};

// Configuration at one sweep point: SNR, bandwidth or oversampling ratio replaced.
SystemConfig apply_sweep_value(const SystemConfig& base, SweepKind kind, double value);

// Rows ordered by sweep value, then b, then receiver as listed in spec.receivers. A failed
// realization is skipped for every receiver at that point; more than 1 %
// failed realizations throws SweepAborted.
SweepResult run_sweep(const SweepSpec& spec, const SystemConfig& config, const PowerParams& power,
                      const SweepOptions& opts = {});

struct ValidationItem {
    std::string name;
    double measured;
    double threshold;
    bool passed;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool passed() const;
};

struct ValidateOptions {
    int n_instances = 4;
    int n_frames = 500;
    long n_scalar_samples = 100000;
    std::uint64_t seed = 1;
    // Also check that the closed-form covariance error does not grow with the
    // resolution over these b.
    std::vector<int> trend_bits;
    // Negative control: flips the sign of the analytic gradient.
    bool corrupt_gradient = false;
};

// Oracle suite on a small configuration: Bussgang gain and orthogonality,
// closed-form QD covariance against Monte Carlo, analog gradient against
// finite differences, analytic against simulated SINDR.
ValidationReport validate(const SystemConfig& config, const ValidateOptions& opts = {});

// Relative error of the closed-form QD covariance against a Monte Carlo
// estimate, averaged over the data subcarriers.
double qd_covariance_error(const std::vector<CMat>& mc, const CMat& closed_form, int K);

// Relative 2-norm error of gradient_g against central differences, taken over
// the real and imaginary parts of `n_coords` random entries.
double gradient_fd_error(const CMat& Urf, const FpWorkset& ws, double gamma, double beta, double rho, int n_coords,
                         RngStream& rng, const GradientFn& gradient = {});

}  // namespace hbrx
