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

#include "hbrx/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "hbrx/analysis.hpp"
#include "hbrx/channel.hpp"
#include "hbrx/quantizer.hpp"
#include "hbrx/signal_chain.hpp"

namespace hbrx {

std::string to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::snr: return "snr";
        case SweepKind::bandwidth: return "bandwidth";
        case SweepKind::osr: return "osr";
        case SweepKind::ee_grid: return "ee_grid";
        case SweepKind::validate: return "validate";
    }
    throw std::invalid_argument("unknown sweep kind");
}

std::string to_string(Receiver receiver) {
    switch (receiver) {
        case Receiver::proposed_hybrid: return "proposed_hybrid";
        case Receiver::svd_hybrid: return "svd_hybrid";
        case Receiver::digital_mmse: return "digital_mmse";
    }
    throw std::invalid_argument("unknown receiver");
}

SweepKind sweep_kind_from_string(const std::string& s) {
    for (SweepKind k : {SweepKind::snr, SweepKind::bandwidth, SweepKind::osr, SweepKind::ee_grid, SweepKind::validate})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown sweep kind '" + s + "'");
}

Receiver receiver_from_string(const std::string& s) {
    for (Receiver r : {Receiver::proposed_hybrid, Receiver::svd_hybrid, Receiver::digital_mmse})
        if (to_string(r) == s) return r;
    throw std::invalid_argument("unknown receiver '" + s + "'");
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep: values must not be empty");
    if (!std::is_sorted(values.begin(), values.end())) throw std::invalid_argument("sweep: values must be sorted");
    if (receivers.empty()) throw std::invalid_argument("sweep: no receivers requested");
    if (n_realizations < 1) throw std::invalid_argument("sweep: n_realizations must be at least 1");
    if (mc_oracle && mc_frames < 1) throw std::invalid_argument("sweep: mc_frames must be positive");
    for (int b : bits)
        if (b < 1) throw std::invalid_argument("sweep: bits must be positive");
    if (kind == SweepKind::osr || kind == SweepKind::ee_grid)
        for (double v : values)
            if (v < 1.0 || v != std::floor(v)) throw std::invalid_argument("sweep: oversampling ratios must be integers >= 1");
}

SystemConfig apply_sweep_value(const SystemConfig& base, SweepKind kind, double value) {
    SystemConfig cfg = base;
    switch (kind) {
        case SweepKind::snr: cfg.snr_db = value; break;
        case SweepKind::bandwidth: cfg = with_bandwidth(cfg, value); break;
        case SweepKind::osr:
        case SweepKind::ee_grid:
            if (value < 1.0 || value != std::floor(value))
                throw std::invalid_argument("sweep: oversampling ratios must be integers >= 1");
            cfg.beta = static_cast<int>(value);
            break;
        case SweepKind::validate: throw std::invalid_argument("validate is not a sweep over values");
    }
    derive(cfg);
    return cfg;
}

namespace {

struct Outcome {
    std::string receiver;
    int b;
    double se;
    int iterations;
    double seconds;
};

struct TaskResult {
    std::vector<Outcome> outcomes;
    bool failed = false;
    std::string what;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TaskResult run_realization(const SweepSpec& spec, double value, const SystemConfig& cfg, const std::vector<int>& bits,
                           int r, const SweepOptions& opts) {
    TaskResult out;
    try {
        RngStream rng(spec.master_seed, static_cast<std::uint64_t>(r));
        const ChannelRealization ch = freq_channel(draw_paths(cfg, rng), cfg);
        for (int b : bits) {
            SystemConfig cb = cfg;
            cb.b = b;
            for (Receiver rx : spec.receivers) {
                const auto t0 = std::chrono::steady_clock::now();
                Outcome o{to_string(rx), b, 0.0, 0, 0.0};
                if (rx == Receiver::digital_mmse) {
                    o.se = design_fully_digital_mmse(ch, cb).se;
                } else {
                    DesignOptions design = opts.design;
                    if (opts.on_iteration) {
                        const RealizationSample tag{value, b, cb.beta, o.receiver, r, 0.0, 0};
                        design.on_iteration = [&opts, tag](const IterationRecord& rec) { opts.on_iteration(tag, rec); };
                    }
                    const DesignResult d = rx == Receiver::proposed_hybrid ? design_hybrid(ch, cb, design)
                                                                           : design_svd_hybrid(ch, cb);
                    o.se = d.se;
                    o.iterations = static_cast<int>(d.iterations.size());
                    if (rx == Receiver::proposed_hybrid && spec.mc_oracle) {
                        o.seconds = opts.timing ? seconds_since(t0) : 0.0;
                        out.outcomes.push_back(o);
                        const auto t1 = std::chrono::steady_clock::now();
                        RngStream mc_rng = rng.substream(static_cast<std::uint64_t>(b));
                        const SindrEstimate est =
                            estimate_sindr_mc(ch, d.combiner, &lloyd_max_cached(b), cb, spec.mc_frames, mc_rng);
                        o = Outcome{kMcOracleReceiver, b, spectral_efficiency(est.sindr), 0, 0.0};
                        if (!std::isfinite(o.se)) throw std::runtime_error("Monte Carlo SINDR is not finite");
                        o.seconds = opts.timing ? seconds_since(t1) : 0.0;
                        out.outcomes.push_back(o);
                        continue;
                    }
                }
                o.seconds = opts.timing ? seconds_since(t0) : 0.0;
                out.outcomes.push_back(o);
            }
        }
    } catch (const std::exception& e) {
        out.outcomes.clear();
        out.failed = true;
        out.what = e.what();
    }
    return out;
}

double receiver_power(const std::string& receiver, const PowerParams& power, const SystemConfig& cfg) {
    return receiver == to_string(Receiver::digital_mmse) ? power_fully_digital(power, cfg) : power_hybrid(power, cfg);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SystemConfig& config, const PowerParams& power, const SweepOptions& opts) {
    spec.validate();
    power.validate();
    if (spec.kind == SweepKind::validate) throw std::invalid_argument("run_sweep: use validate() for the oracle suite");
    const std::vector<int> bits = spec.bits.empty() ? std::vector<int>{config.b} : spec.bits;

    std::vector<SystemConfig> points;
    for (double v : spec.values) points.push_back(apply_sweep_value(config, spec.kind, v));

    const size_t n_real = static_cast<size_t>(spec.n_realizations);
    const size_t n_tasks = points.size() * n_real;
    std::vector<TaskResult> results(n_tasks);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t task = next++; task < n_tasks; task = next++) {
            const size_t p = task / n_real;
            const int r = static_cast<int>(task % n_real);
            results[task] = run_realization(spec, spec.values[p], points[p], bits, r, opts);
            if (opts.on_sample)
                for (const Outcome& o : results[task].outcomes)
                    opts.on_sample({spec.values[p], o.b, points[p].beta, o.receiver, r, o.se, o.iterations});
        }
    };
    const int n_workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(n_tasks)));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepResult out;
    for (size_t task = 0; task < n_tasks; ++task)
        if (results[task].failed)
            out.failures.push_back({spec.values[task / n_real], static_cast<int>(task % n_real), spec.master_seed, results[task].what});
    if (static_cast<double>(out.failures.size()) > 0.01 * static_cast<double>(n_tasks)) {
        std::ostringstream msg;
        msg << "sweep aborted: " << out.failures.size() << " of " << n_tasks << " realizations failed (first: realization "
            << out.failures.front().realization << ", seed " << spec.master_seed << ": " << out.failures.front().what << ")";
        throw SweepAborted(msg.str(), out.failures);
    }

    std::vector<std::string> labels;
    for (Receiver rx : spec.receivers) {
        labels.push_back(to_string(rx));
        if (rx == Receiver::proposed_hybrid && spec.mc_oracle) labels.push_back(kMcOracleReceiver);
    }

    for (size_t p = 0; p < points.size(); ++p) {
        for (int b : bits) {
            SystemConfig cb = points[p];
            cb.b = b;
            for (const std::string& label : labels) {
                std::vector<double> se;
                double seconds = 0.0, iterations = 0.0;
                for (size_t r = 0; r < n_real; ++r) {
                    const TaskResult& tr = results[p * n_real + r];
                    for (const Outcome& o : tr.outcomes)
                        if (o.b == b && o.receiver == label) {
                            se.push_back(o.se);
                            seconds += o.seconds;
                            iterations += o.iterations;
                            out.samples.push_back({spec.values[p], b, cb.beta, label, static_cast<int>(r), o.se, o.iterations});
                        }
                }
                ResultRow row;
                row.sweep_kind = to_string(spec.kind);
                row.sweep_value = spec.values[p];
                row.receiver = label;
                row.b = b;
                row.beta = cb.beta;
                row.n_realizations = static_cast<int>(se.size());
                if (!se.empty()) {
                    const double n = static_cast<double>(se.size());
                    double mean = 0.0;
                    for (double v : se) mean += v;
                    mean /= n;
                    double ss = 0.0;
                    for (double v : se) ss += (v - mean) * (v - mean);
                    row.se_mean = mean;
                    row.se_stderr = se.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
                    row.wall_time_s = seconds / n;
                    row.iterations_mean = iterations / n;
                    const double pw = receiver_power(label, power, cb);
                    row.ee = opts.ee_bits_per_joule ? energy_efficiency_bits_per_joule(mean, pw, derive(cb).Bw)
                                                    : energy_efficiency(mean, pw);
                }
                out.rows.push_back(row);
            }
        }
    }
    return out;
}

bool ValidationReport::passed() const {
    return std::all_of(items.begin(), items.end(), [](const ValidationItem& i) { return i.passed; });
}

double qd_covariance_error(const std::vector<CMat>& mc, const CMat& closed_form, int K) {
    if (K < 1 || static_cast<int>(mc.size()) < K) throw std::invalid_argument("qd_covariance_error: need K Monte Carlo matrices");
    const double ref = closed_form.norm();
    if (!(ref > 0.0)) throw std::invalid_argument("qd_covariance_error: closed form is zero");
    double total = 0.0;
    for (int k = 0; k < K; ++k) total += (mc[static_cast<size_t>(k)] - closed_form).norm() / ref;
    return total / K;
}

double gradient_fd_error(const CMat& Urf, const FpWorkset& ws, double gamma, double beta, double rho, int n_coords,
                         RngStream& rng, const GradientFn& gradient) {
    const CMat grad = gradient ? gradient(Urf) : gradient_g(Urf, ws, gamma, beta, rho);
    // g is a real quadratic in (Re Urf, Im Urf), so central differences are exact up to rounding.
    const double h = 1e-3;
    double num = 0.0, den = 0.0;
    for (int c = 0; c < n_coords; ++c) {
        const auto m = static_cast<Eigen::Index>(rng.uniform(0.0, 1.0) * static_cast<double>(Urf.rows()));
        const auto n = static_cast<Eigen::Index>(rng.uniform(0.0, 1.0) * static_cast<double>(Urf.cols()));
        for (cd dir : {cd{1.0, 0.0}, cd{0.0, 1.0}}) {
            CMat up = Urf, dn = Urf;
            up(m, n) += h * dir;
            dn(m, n) -= h * dir;
            const double fd = (evaluate_g(up, ws, gamma, beta, rho) - evaluate_g(dn, ws, gamma, beta, rho)) / (2.0 * h);
            const double an = dir.real() != 0.0 ? grad(m, n).real() : grad(m, n).imag();
            num += (fd - an) * (fd - an);
            den += an * an;
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

namespace {

double prop1_threshold(int b) {
    if (b >= 5) return 0.12;
    if (b >= 3) return 0.25;
    return 0.5;
}

CMat random_constant_modulus(int M, int Nrf, RngStream& rng) {
    CMat U(M, Nrf);
    for (Eigen::Index c = 0; c < U.cols(); ++c)
        for (Eigen::Index r = 0; r < U.rows(); ++r) U(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(M)), rng.uniform(0.0, 2.0 * M_PI));
    return U;
}

double mean_prop1_error(const SystemConfig& config, int b, const ValidateOptions& opts) {
    SystemConfig cb = config;
    cb.b = b;
    const ScalarQuantizer& q = lloyd_max_cached(b);
    double total = 0.0;
    for (int inst = 0; inst < opts.n_instances; ++inst) {
        RngStream rng(opts.seed, static_cast<std::uint64_t>(inst));
        const ChannelRealization ch = freq_channel(draw_paths(cb, rng), cb);
        // The receiver's SVD-initialized analog combiner: the operating point
        // at which the closed form is used.
        const CMat Urf = init_analog_svd(ch, cb.Nrf);
        RngStream mc_rng = rng.substream(2 + static_cast<std::uint64_t>(b));
        const QdCovarianceEstimate mc = estimate_qd_covariance_mc(ch, Urf, q, cb, opts.n_frames, mc_rng);
        total += qd_covariance_error(mc.cov, qd_covariance_closed_form(ch, Urf, q.gamma, cb), cb.K);
    }
    return total / opts.n_instances;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(4);
    s << v;
    return s.str();
}

}  // namespace

ValidationReport validate(const SystemConfig& config, const ValidateOptions& opts) {
    derive(config);
    if (opts.n_instances < 1 || opts.n_frames < 1) throw std::invalid_argument("validate: counts must be positive");
    ValidationReport report;
    const ScalarQuantizer& q = lloyd_max_cached(config.b);
    const double alpha = 1.0 - q.gamma;

    {
        RngStream rng(opts.seed, 0xB055);
        const double a_emp = bussgang_alpha_empirical(q, opts.n_scalar_samples, rng);
        const double err = std::abs(a_emp - alpha);
        report.items.push_back({"bussgang_gain", err, 0.01, err < 0.01, "alpha_emp=" + fmt(a_emp) + " 1-gamma=" + fmt(alpha)});

        double s_ey = 0.0, s_ee = 0.0, s_yy = 0.0;
        for (long n = 0; n < opts.n_scalar_samples; ++n) {
            const double y = rng.normal();
            const double eta = q.apply(y) - alpha * y;
            s_ey += eta * y;
            s_ee += eta * eta;
            s_yy += y * y;
        }
        const double corr = std::abs(s_ey) / std::sqrt(s_ee * s_yy);
        report.items.push_back({"bussgang_orthogonality", corr, 0.01, corr < 0.01, "|corr(eta, y)|"});
    }

    {
        const double err = mean_prop1_error(config, config.b, opts);
        const double thr = prop1_threshold(config.b);
        report.items.push_back({"qd_covariance_closed_form_vs_mc", err, thr, err < thr,
                                "mean relative Frobenius error over " + std::to_string(opts.n_instances) + " instances"});
    }

    if (!opts.trend_bits.empty()) {
        std::vector<double> errs;
        std::string detail;
        for (int b : opts.trend_bits) {
            errs.push_back(mean_prop1_error(config, b, opts));
            detail += "b=" + std::to_string(b) + ":" + fmt(errs.back()) + " ";
        }
        double worst = 0.0;
        for (size_t i = 1; i < errs.size(); ++i) worst = std::max(worst, errs[i] - errs[i - 1]);
        report.items.push_back({"qd_covariance_error_trend", worst, 0.0, worst <= 0.0, detail});
    }

    RngStream rng(opts.seed, 0);
    const ChannelRealization ch = freq_channel(draw_paths(config, rng), config);
    const DistortionParams dp = distortion_params(config);

    {
        const DesignResult init = design_svd_hybrid(ch, config);
        const EffectiveNoise noise = effective_noise_cov(ch, init.combiner.Urf, dp.gamma, dp.beta, dp.rho);
        FpAuxState aux;
        aux.t = update_aux_t(ch, init.combiner, noise.Ce);
        aux.q = update_aux_q(ch, init.combiner, noise.Ce, aux.t);
        const FpWorkset ws = build_workset(ch, init.combiner, aux);
        RngStream g_rng = rng.substream(10);
        const CMat U = random_constant_modulus(config.M, config.Nrf, g_rng);
        GradientFn grad;
        if (opts.corrupt_gradient) grad = [&](const CMat& X) -> CMat { return -gradient_g(X, ws, dp.gamma, dp.beta, dp.rho); };
        const double err = gradient_fd_error(U, ws, dp.gamma, dp.beta, dp.rho, 10, g_rng, grad);
        report.items.push_back({"gradient_finite_difference", err, 1e-5, err < 1e-5, "relative error over 10 entries"});
    }

    {
        const DesignResult design = design_hybrid(ch, config);
        const EffectiveNoise noise = effective_noise_cov(ch, design.combiner.Urf, dp.gamma, dp.beta, dp.rho);
        const SindrMap analytic = sindr(ch, design.combiner, noise.Ce);
        RngStream mc_rng = rng.substream(11);
        const SindrEstimate emp = estimate_sindr_mc(ch, design.combiner, &q, config, opts.n_frames, mc_rng);
        double total = 0.0;
        int count = 0;
        for (Eigen::Index k = 0; k < analytic.zeta.cols(); ++k)
            for (Eigen::Index i = 0; i < analytic.zeta.rows(); ++i) {
                const double z = analytic.zeta(i, k), ze = emp.sindr(i, k);
                if (!(z > 0.0) || !std::isfinite(ze) || !(ze > 0.0)) continue;
                total += std::abs(10.0 * std::log10(ze / z));
                ++count;
            }
        const double err = count > 0 ? total / count : std::numeric_limits<double>::infinity();
        report.items.push_back({"sindr_analytic_vs_mc_db", err, 1.0, err < 1.0, "mean |10 log10(emp/analytic)| over (i, k)"});
    }
    return report;
}

}  // namespace hbrx
