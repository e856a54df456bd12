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

#include <doctest.h>

#include <cmath>
#include <set>

#include "hbrx/harness.hpp"

using namespace hbrx;

namespace {

SystemConfig tiny() {
    SystemConfig c;
    c.M = 8;
    c.Nrf = 2;
    c.I = 2;
    c.K = 8;
    return c;
}

SweepSpec snr_spec() {
    SweepSpec s;
    s.kind = SweepKind::snr;
    s.values = {0.0, 10.0};
    s.bits = {1, 3};
    s.n_realizations = 4;
    s.master_seed = 17;
    return s;
}

}  // namespace

TEST_CASE("names round trip") {
    for (SweepKind k : {SweepKind::snr, SweepKind::bandwidth, SweepKind::osr, SweepKind::ee_grid, SweepKind::validate})
        CHECK(sweep_kind_from_string(to_string(k)) == k);
    for (Receiver r : {Receiver::proposed_hybrid, Receiver::svd_hybrid, Receiver::digital_mmse})
        CHECK(receiver_from_string(to_string(r)) == r);
    CHECK_THROWS(sweep_kind_from_string("nope"));
    CHECK_THROWS(receiver_from_string("nope"));
}

TEST_CASE("sweep values map onto the configuration") {
    const SystemConfig c = tiny();
    CHECK(apply_sweep_value(c, SweepKind::snr, 5.0).snr_db == 5.0);
    CHECK(apply_sweep_value(c, SweepKind::osr, 3.0).beta == 3);
    CHECK(apply_sweep_value(c, SweepKind::ee_grid, 4.0).beta == 4);
    const SystemConfig bw = apply_sweep_value(c, SweepKind::bandwidth, 20e9);
    CHECK(bw.K * bw.delta_f == doctest::Approx(20e9));
    CHECK_THROWS(apply_sweep_value(c, SweepKind::osr, 1.5));
}

TEST_CASE("invalid sweep specifications are rejected") {
    SweepSpec s = snr_spec();
    s.n_realizations = 0;
    CHECK_THROWS(s.validate());
    s = snr_spec();
    s.values.clear();
    CHECK_THROWS(s.validate());
    s = snr_spec();
    s.receivers.clear();
    CHECK_THROWS(s.validate());
}

TEST_CASE("row layout and statistics") {
    const SweepResult res = run_sweep(snr_spec(), tiny(), PowerParams{});
    REQUIRE(res.rows.size() == 2 * 2 * 3);
    CHECK(res.failures.empty());
    CHECK(res.samples.size() == 2 * 4 * 2 * 3);
    const ResultRow& first = res.rows.front();
    CHECK(first.sweep_kind == "snr");
    CHECK(first.sweep_value == 0.0);
    CHECK(first.b == 1);
    CHECK(first.receiver == "proposed_hybrid");
    CHECK(res.rows[1].receiver == "svd_hybrid");
    CHECK(res.rows[2].receiver == "digital_mmse");
    CHECK(res.rows[3].b == 3);
    CHECK(res.rows[6].sweep_value == 10.0);

    for (const ResultRow& row : res.rows) {
        std::vector<double> se;
        for (const auto& s : res.samples)
            if (s.sweep_value == row.sweep_value && s.b == row.b && s.receiver == row.receiver) se.push_back(s.se);
        REQUIRE(se.size() == 4);
        double mean = 0.0;
        for (double v : se) mean += v;
        mean /= 4.0;
        double var = 0.0;
        for (double v : se) var += (v - mean) * (v - mean);
        CHECK(row.se_mean == doctest::Approx(mean));
        CHECK(row.se_stderr == doctest::Approx(std::sqrt(var / 3.0) / 2.0));
        CHECK(row.n_realizations == 4);
        CHECK(row.wall_time_s == 0.0);
        SystemConfig cb = tiny();
        cb.b = row.b;
        const double P = row.receiver == "digital_mmse" ? power_fully_digital(PowerParams{}, cb) : power_hybrid(PowerParams{}, cb);
        CHECK(row.ee == doctest::Approx(row.se_mean / P));
    }
}

TEST_CASE("reruns and worker counts give identical rows") {
    const SweepResult a = run_sweep(snr_spec(), tiny(), PowerParams{});
    const SweepResult b = run_sweep(snr_spec(), tiny(), PowerParams{});
    SweepOptions par;
    par.workers = 3;
    const SweepResult c = run_sweep(snr_spec(), tiny(), PowerParams{}, par);
    CHECK(a.rows == b.rows);
    CHECK(a.rows == c.rows);
}

TEST_CASE("receivers share the channel of each realization") {
    // Same seed, different receiver subsets: the per-realization SE of one
    // receiver does not depend on which others run alongside it.
    SweepSpec all = snr_spec();
    SweepSpec one = snr_spec();
    one.receivers = {Receiver::digital_mmse};
    const SweepResult ra = run_sweep(all, tiny(), PowerParams{});
    const SweepResult ro = run_sweep(one, tiny(), PowerParams{});
    for (const auto& s : ro.samples) {
        bool found = false;
        for (const auto& t : ra.samples)
            if (t.receiver == s.receiver && t.realization == s.realization && t.b == s.b && t.sweep_value == s.sweep_value) {
                CHECK(t.se == s.se);
                found = true;
            }
        CHECK(found);
    }
}

TEST_CASE("timing is recorded only when requested") {
    SweepOptions opts;
    opts.timing = true;
    const SweepResult res = run_sweep(snr_spec(), tiny(), PowerParams{}, opts);
    for (const auto& row : res.rows) CHECK(row.wall_time_s > 0.0);
}

TEST_CASE("Monte Carlo oracle rows follow the proposed design") {
    SweepSpec s = snr_spec();
    s.values = {10.0};
    s.bits = {3};
    s.n_realizations = 2;
    s.mc_oracle = true;
    s.mc_frames = 50;
    const SweepResult res = run_sweep(s, tiny(), PowerParams{});
    REQUIRE(res.rows.size() == 4);
    CHECK(res.rows[0].receiver == "proposed_hybrid");
    CHECK(res.rows[1].receiver == kMcOracleReceiver);
    CHECK(std::isfinite(res.rows[1].se_mean));
}

TEST_CASE("isolated failures are skipped, frequent failures abort") {
    SweepSpec s;
    s.kind = SweepKind::snr;
    s.values = {10.0};
    s.bits = {1};
    s.receivers = {Receiver::proposed_hybrid, Receiver::digital_mmse};
    s.n_realizations = 101;
    SweepOptions opts;
    opts.design.max_iter_outer = 2;
    std::set<int> bad{7};
    opts.on_iteration = [&bad](const RealizationSample& tag, const IterationRecord&) {
        if (bad.count(tag.realization)) throw std::runtime_error("injected");
    };
    const SweepResult res = run_sweep(s, tiny(), PowerParams{}, opts);
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures[0].realization == 7);
    CHECK(res.failures[0].what == "injected");
    // The failed realization is dropped for every receiver.
    for (const auto& row : res.rows) CHECK(row.n_realizations == 100);

    bad = {3, 50};
    CHECK_THROWS_AS(run_sweep(s, tiny(), PowerParams{}, opts), SweepAborted);
}

TEST_CASE("bits-per-joule efficiency") {
    SweepSpec s = snr_spec();
    s.values = {10.0};
    s.bits = {2};
    s.receivers = {Receiver::svd_hybrid};
    SweepOptions opts;
    opts.ee_bits_per_joule = true;
    const SweepResult res = run_sweep(s, tiny(), PowerParams{}, opts);
    SystemConfig cb = tiny();
    cb.b = 2;
    const double bw = derive(cb).Bw;
    CHECK(res.rows[0].ee == doctest::Approx(res.rows[0].se_mean * bw / power_hybrid(PowerParams{}, cb)));
}

TEST_CASE("validation suite passes on a small system and catches a wrong gradient") {
    SystemConfig c;
    c.M = 16;
    c.Nrf = 4;
    c.I = 2;
    c.K = 16;
    c.b = 4;
    ValidateOptions o;
    o.n_instances = 1;
    o.n_frames = 200;
    const ValidationReport good = validate(c, o);
    for (const auto& it : good.items) CHECK_MESSAGE(it.passed, it.name << " " << it.measured << " vs " << it.threshold);
    o.corrupt_gradient = true;
    const ValidationReport bad = validate(c, o);
    CHECK_FALSE(bad.passed());
}
