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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbrx/core.hpp"
#include "hbrx/harness.hpp"
#include "hbrx/power.hpp"

namespace hbrx {

inline constexpr const char* kCsvHeader =
    "sweep_kind,sweep_value,receiver,b,beta,se_mean,se_stderr,ee,n_realizations,wall_time_s,iterations_mean";

enum class ResultFormat { csv, json };

// Floating-point fields are written in round-trip scientific notation with '.'
// as decimal point regardless of the global locale.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);

nlohmann::json rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_json(const nlohmann::json& j);

// Throws std::runtime_error naming the path on I/O failure.
void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path, ResultFormat format);

// Contents of a run configuration document {"system": {...}, "power": {...}, "sweep": {...}}.
// Missing sections and keys keep their defaults; unknown keys are rejected.
struct RunConfig {
    SystemConfig system;
    PowerParams power;
    SweepSpec sweep;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& rc);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace hbrx
