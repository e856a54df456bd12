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

// hbrx command line front end: sweep, validate, ee-grid.
//
// Exit codes: 0 success, 2 validation failure, 1 error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>

#include "hbrx/harness.hpp"
#include "hbrx/results_io.hpp"

namespace {

using namespace hbrx;

struct Overrides {
    std::string config_path;
    std::optional<double> snr_db;
    std::optional<int> beta;
    std::optional<int> b;
    std::optional<int> M;
    std::optional<int> Nrf;
    std::optional<int> I;
    std::optional<int> K;
    std::optional<double> bandwidth;
    std::optional<std::string> gamma_source;

    void add_to(CLI::App* app) {
        app->add_option("-c,--config", config_path, "JSON document with system, power and sweep sections");
        app->add_option("--snr-db", snr_db, "SNR in dB");
        app->add_option("--beta", beta, "oversampling ratio");
        app->add_option("--b", b, "ADC bits of the base configuration");
        app->add_option("--M", M, "antennas");
        app->add_option("--Nrf", Nrf, "RF chains");
        app->add_option("--I", I, "users");
        app->add_option("--K", K, "data subcarriers");
        app->add_option("--bandwidth", bandwidth, "transmission bandwidth in Hz");
        app->add_option("--gamma-source", gamma_source, "lloyd_max or fit")->check(CLI::IsMember({"lloyd_max", "fit"}));
    }

    RunConfig resolve() const {
        RunConfig rc = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        SystemConfig& c = rc.system;
        if (snr_db) c.snr_db = *snr_db;
        if (beta) c.beta = *beta;
        if (b) c.b = *b;
        if (M) c.M = *M;
        if (Nrf) c.Nrf = *Nrf;
        if (I) c.I = *I;
        if (K) c.K = *K;
        if (bandwidth) c = with_bandwidth(c, *bandwidth);
        if (gamma_source) c.gamma_source = *gamma_source == "fit" ? GammaSource::fit : GammaSource::lloyd_max;
        derive(c);
        return rc;
    }
};

struct SweepFlags {
    std::optional<std::string> kind;
    std::vector<double> values;
    std::vector<int> bits;
    std::vector<std::string> receivers;
    std::optional<int> realizations;
    std::optional<std::uint64_t> seed;
    bool mc_oracle = false;
    std::optional<int> mc_frames;
    std::string out;
    std::string format = "csv";
    std::string log;
    int workers = 1;
    bool timing = false;
    bool bits_per_joule = false;

    void add_to(CLI::App* app, bool with_kind) {
        if (with_kind)
            app->add_option("--kind", kind, "snr, bandwidth or osr")->check(CLI::IsMember({"snr", "bandwidth", "osr", "ee_grid"}));
        app->add_option("--values", values, "sweep points (dB, Hz or oversampling ratio)");
        app->add_option("--bits", bits, "ADC resolutions evaluated at every point");
        app->add_option("--receivers", receivers, "proposed_hybrid, svd_hybrid, digital_mmse");
        app->add_option("--realizations", realizations, "channel realizations per point");
        app->add_option("--seed", seed, "master seed");
        app->add_flag("--mc-oracle", mc_oracle, "add Monte Carlo SINDR rows for the proposed design");
        app->add_option("--mc-frames", mc_frames, "frames per Monte Carlo estimate");
        app->add_option("-o,--out", out, "output file (stdout if omitted)");
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--log", log, "JSON-lines log of per-iteration and per-realization records");
        app->add_option("--workers", workers, "parallel realizations")->check(CLI::PositiveNumber);
        app->add_flag("--timing", timing, "record wall time (makes output run dependent)");
        app->add_flag("--bits-per-joule", bits_per_joule, "report EE in bit/J instead of bit/s/Hz/W");
    }

    void apply(SweepSpec& spec) const {
        if (kind) spec.kind = sweep_kind_from_string(*kind);
        if (!values.empty()) spec.values = values;
        if (!bits.empty()) spec.bits = bits;
        if (!receivers.empty()) {
            spec.receivers.clear();
            for (const auto& r : receivers) spec.receivers.push_back(receiver_from_string(r));
        }
        if (realizations) spec.n_realizations = *realizations;
        if (seed) spec.master_seed = *seed;
        if (mc_oracle) spec.mc_oracle = true;
        if (mc_frames) spec.mc_frames = *mc_frames;
    }
};

int run_sweep_command(const RunConfig& rc, const SweepFlags& flags) {
    SweepOptions opts;
    opts.workers = flags.workers;
    opts.timing = flags.timing;
    opts.ee_bits_per_joule = flags.bits_per_joule;

    std::ofstream log;
    std::mutex log_mutex;
    if (!flags.log.empty()) {
        log.open(flags.log);
        if (!log) throw std::runtime_error("cannot open log '" + flags.log + "'");
        opts.on_iteration = [&](const RealizationSample& tag, const IterationRecord& rec) {
            const nlohmann::json j{{"event", "iteration"}, {"sweep_value", tag.sweep_value}, {"b", tag.b},
                                   {"beta", tag.beta}, {"realization", tag.realization}, {"iteration", rec.iteration},
                                   {"f_q", rec.f_q}, {"R", rec.R}, {"pga_iterations", rec.pga_iterations},
                                   {"mu_accepted", rec.mu_accepted}, {"pga_stalled", rec.pga_stalled}};
            std::lock_guard lock(log_mutex);
            log << j.dump() << '\n';
        };
        opts.on_sample = [&](const RealizationSample& s) {
            const nlohmann::json j{{"event", "realization"}, {"sweep_value", s.sweep_value}, {"b", s.b},
                                   {"beta", s.beta}, {"receiver", s.receiver}, {"realization", s.realization},
                                   {"se", s.se}, {"iterations", s.iterations}};
            std::lock_guard lock(log_mutex);
            log << j.dump() << '\n';
        };
    }

    const SweepResult res = run_sweep(rc.sweep, rc.system, rc.power, opts);
    for (const auto& f : res.failures)
        std::cerr << "warning: realization " << f.realization << " at " << f.sweep_value << " (seed " << f.master_seed
                  << ") failed: " << f.what << "\n";

    const ResultFormat fmt = flags.format == "json" ? ResultFormat::json : ResultFormat::csv;
    if (flags.out.empty())
        std::cout << (fmt == ResultFormat::csv ? rows_to_csv(res.rows) : rows_to_json(res.rows).dump(2) + "\n");
    else
        emit_results(res.rows, flags.out, fmt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid receiver design for low-resolution massive MIMO-OFDM"};
    app.require_subcommand(1);

    Overrides sweep_over, grid_over, val_over;
    SweepFlags sweep_flags, grid_flags;

    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over SNR, bandwidth or oversampling ratio");
    sweep_over.add_to(sweep);
    sweep_flags.add_to(sweep, true);

    auto* grid = app.add_subcommand("ee-grid", "energy efficiency over ADC bits and oversampling ratio");
    grid_over.add_to(grid);
    grid_flags.add_to(grid, false);

    auto* val = app.add_subcommand("validate", "closed-form models against Monte Carlo oracles");
    val_over.add_to(val);
    ValidateOptions vopts;
    std::string val_json;
    val->add_option("--instances", vopts.n_instances, "random channel instances for the covariance check");
    val->add_option("--frames", vopts.n_frames, "OFDM frames per Monte Carlo estimate");
    val->add_option("--samples", vopts.n_scalar_samples, "scalar samples for the Bussgang checks");
    val->add_option("--seed", vopts.seed, "seed");
    val->add_option("--trend-bits", vopts.trend_bits, "also require the covariance error to be non-increasing over these b");
    val->add_flag("--corrupt-gradient", vopts.corrupt_gradient, "negative control: flip the gradient sign");
    val->add_option("--json", val_json, "write the report as JSON to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sweep) {
            RunConfig rc = sweep_over.resolve();
            sweep_flags.apply(rc.sweep);
            if (rc.sweep.kind == SweepKind::validate) throw std::invalid_argument("use the validate subcommand");
            return run_sweep_command(rc, sweep_flags);
        }
        if (*grid) {
            RunConfig rc = grid_over.resolve();
            // Defaults for the grid unless the config or flags say otherwise.
            if (rc.sweep.kind != SweepKind::ee_grid) {
                rc.sweep.kind = SweepKind::ee_grid;
                rc.sweep.values = {1, 2, 4, 8, 16};
                rc.sweep.bits = {1, 2, 3, 4, 5, 6, 7, 8};
                rc.sweep.receivers = {Receiver::proposed_hybrid, Receiver::digital_mmse};
            }
            grid_flags.apply(rc.sweep);
            return run_sweep_command(rc, grid_flags);
        }
        if (*val) {
            const RunConfig rc = val_over.resolve();
            for (const auto& w : config_warnings(rc.system)) std::cerr << "warning: " << w << "\n";
            const ValidationReport rep = validate(rc.system, vopts);
            nlohmann::json items = nlohmann::json::array();
            for (const auto& it : rep.items) {
                std::cout << (it.passed ? "PASS " : "FAIL ") << it.name << " measured=" << it.measured
                          << " threshold=" << it.threshold << "  " << it.detail << "\n";
                items.push_back({{"name", it.name}, {"measured", it.measured}, {"threshold", it.threshold},
                                 {"passed", it.passed}, {"detail", it.detail}});
            }
            if (!val_json.empty()) {
                std::ofstream out(val_json);
                if (!out) throw std::runtime_error("cannot open '" + val_json + "'");
                out << nlohmann::json{{"passed", rep.passed()}, {"items", items}}.dump(2) << "\n";
            }
            return rep.passed() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
