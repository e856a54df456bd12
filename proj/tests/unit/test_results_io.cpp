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

#include <clocale>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "hbrx/results_io.hpp"

using namespace hbrx;

namespace {

std::vector<ResultRow> sample_rows() {
    return {{"snr", -5.0, "proposed_hybrid", 3, 1, 12.345678901234567, 0.1, 1.0 / 3.0, 100, 0.0, 7.25},
            {"bandwidth", 4.5e10, "digital_mmse", 8, 2, 1e-300, 0.0, 5e-324, 1, 12.5, 0.0}};
}

struct CommaDecimal : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
};

}  // namespace

TEST_CASE("CSV header is fixed") {
    const std::string csv = rows_to_csv({});
    CHECK(csv == std::string(kCsvHeader) + "\n");
    CHECK(std::string(kCsvHeader) ==
          "sweep_kind,sweep_value,receiver,b,beta,se_mean,se_stderr,ee,n_realizations,wall_time_s,iterations_mean");
    CHECK(rows_from_csv(csv).empty());
}

TEST_CASE("CSV round trip is exact") {
    const auto rows = sample_rows();
    CHECK(rows_from_csv(rows_to_csv(rows)) == rows);
}

TEST_CASE("CSV output ignores the global locale") {
    const std::string before = rows_to_csv(sample_rows());
    const std::locale old = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
    const std::string after = rows_to_csv(sample_rows());
    const auto parsed = rows_from_csv(after);
    std::locale::global(old);
    CHECK(before == after);
    CHECK(parsed == sample_rows());
}

TEST_CASE("malformed CSV is rejected") {
    CHECK_THROWS(rows_from_csv(""));
    CHECK_THROWS(rows_from_csv("a,b\n"));
    CHECK_THROWS(rows_from_csv(std::string(kCsvHeader) + "\nsnr,1,x,3\n"));
    CHECK_THROWS(rows_from_csv(std::string(kCsvHeader) + "\nsnr,1.0x,x,3,1,1,1,1,1,1,1\n"));
    auto bad = sample_rows();
    bad[0].receiver = "a,b";
    CHECK_THROWS(rows_to_csv(bad));
}

TEST_CASE("JSON round trip") {
    const auto rows = sample_rows();
    CHECK(rows_from_json(nlohmann::json::parse(rows_to_json(rows).dump())) == rows);
    CHECK_THROWS(rows_from_json(nlohmann::json::object()));
}

TEST_CASE("emit_results writes files and names the path on failure") {
    const auto dir = std::filesystem::temp_directory_path() / "hbrx_results_io_test";
    std::filesystem::create_directories(dir);
    emit_results(sample_rows(), dir / "r.csv", ResultFormat::csv);
    std::ifstream in(dir / "r.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(rows_from_csv(ss.str()) == sample_rows());
    emit_results(sample_rows(), dir / "r.json", ResultFormat::json);
    std::filesystem::remove_all(dir);
    try {
        emit_results(sample_rows(), "/nonexistent_dir_hbrx/x.csv", ResultFormat::csv);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("/nonexistent_dir_hbrx/x.csv") != std::string::npos);
    }
}

TEST_CASE("run configuration documents") {
    const auto j = nlohmann::json::parse(R"({
        "system": {"M": 32, "K": 32, "bandwidth": 20e9, "gamma_source": "fit", "snr_db": 5},
        "power": {"kappa": 1e-13},
        "sweep": {"kind": "osr", "values": [1, 2], "bits": [1, 3], "receivers": ["digital_mmse"],
                  "n_realizations": 7, "master_seed": 9, "mc_oracle": true, "mc_frames": 20}
    })");
    const RunConfig rc = run_config_from_json(j);
    CHECK(rc.system.M == 32);
    CHECK(rc.system.K * rc.system.delta_f == doctest::Approx(20e9));
    CHECK(rc.system.gamma_source == GammaSource::fit);
    CHECK(rc.system.Nrf == 4);
    CHECK(rc.power.kappa == 1e-13);
    CHECK(rc.power.P_RF == 43e-3);
    CHECK(rc.sweep.kind == SweepKind::osr);
    CHECK(rc.sweep.receivers == std::vector<Receiver>{Receiver::digital_mmse});
    CHECK(rc.sweep.n_realizations == 7);
    CHECK(rc.sweep.mc_oracle);

    const RunConfig back = run_config_from_json(run_config_to_json(rc));
    CHECK(back.system.delta_f == rc.system.delta_f);
    CHECK(back.sweep.values == rc.sweep.values);
    CHECK(back.sweep.bits == rc.sweep.bits);
    CHECK(back.sweep.master_seed == 9);

    CHECK_THROWS(run_config_from_json(nlohmann::json::parse(R"({"system": {"MM": 3}})")));
    CHECK_THROWS(run_config_from_json(nlohmann::json::parse(R"({"extra": {}})")));
    CHECK_THROWS(run_config_from_json(nlohmann::json::parse(R"({"system": {"bandwidth": 1e9, "delta_f": 1e6}})")));
    CHECK_THROWS(run_config_from_json(nlohmann::json::parse(R"({"system": {"gamma_source": "x"}})")));
    CHECK_THROWS(load_run_config("/nonexistent_hbrx.json"));
}
