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

#include "hbrx/results_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hbrx {

namespace {

void append_double(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    out.append(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s, const char* field, int line) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("csv line " + std::to_string(line) + ": bad " + field + " '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (;;) {
        const size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& section) {
    if (!j.is_object()) throw std::invalid_argument("config: section '" + section + "' must be an object");
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + section + "." + key + "'");
}

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ResultRow& r : rows) {
        if (r.sweep_kind.find_first_of(",\n") != std::string::npos || r.receiver.find_first_of(",\n") != std::string::npos)
            throw std::invalid_argument("csv: labels must not contain commas or newlines");
        out += r.sweep_kind;
        out += ',';
        append_double(out, r.sweep_value);
        out += ',';
        out += r.receiver;
        out += ',' + std::to_string(r.b) + ',' + std::to_string(r.beta) + ',';
        append_double(out, r.se_mean);
        out += ',';
        append_double(out, r.se_stderr);
        out += ',';
        append_double(out, r.ee);
        out += ',' + std::to_string(r.n_realizations) + ',';
        append_double(out, r.wall_time_s);
        out += ',';
        append_double(out, r.iterations_mean);
        out += '\n';
    }
    return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
    std::vector<ResultRow> rows;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::invalid_argument("csv: unexpected header '" + line + "'");
    int n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 11) throw std::invalid_argument("csv line " + std::to_string(n) + ": expected 11 fields");
        ResultRow r;
        r.sweep_kind = std::string(f[0]);
        r.sweep_value = parse_number<double>(f[1], "sweep_value", n);
        r.receiver = std::string(f[2]);
        r.b = parse_number<int>(f[3], "b", n);
        r.beta = parse_number<int>(f[4], "beta", n);
        r.se_mean = parse_number<double>(f[5], "se_mean", n);
        r.se_stderr = parse_number<double>(f[6], "se_stderr", n);
        r.ee = parse_number<double>(f[7], "ee", n);
        r.n_realizations = parse_number<int>(f[8], "n_realizations", n);
        r.wall_time_s = parse_number<double>(f[9], "wall_time_s", n);
        r.iterations_mean = parse_number<double>(f[10], "iterations_mean", n);
        rows.push_back(std::move(r));
    }
    return rows;
}

nlohmann::json rows_to_json(const std::vector<ResultRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ResultRow& r : rows)
        arr.push_back({{"sweep_kind", r.sweep_kind}, {"sweep_value", r.sweep_value}, {"receiver", r.receiver},
                       {"b", r.b}, {"beta", r.beta}, {"se_mean", r.se_mean}, {"se_stderr", r.se_stderr}, {"ee", r.ee},
                       {"n_realizations", r.n_realizations}, {"wall_time_s", r.wall_time_s},
                       {"iterations_mean", r.iterations_mean}});
    return arr;
}

std::vector<ResultRow> rows_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("json results must be an array");
    std::vector<ResultRow> rows;
    for (const auto& o : j) {
        ResultRow r;
        r.sweep_kind = o.at("sweep_kind").get<std::string>();
        r.sweep_value = o.at("sweep_value").get<double>();
        r.receiver = o.at("receiver").get<std::string>();
        r.b = o.at("b").get<int>();
        r.beta = o.at("beta").get<int>();
        r.se_mean = o.at("se_mean").get<double>();
        r.se_stderr = o.at("se_stderr").get<double>();
        r.ee = o.at("ee").get<double>();
        r.n_realizations = o.at("n_realizations").get<int>();
        r.wall_time_s = o.at("wall_time_s").get<double>();
        r.iterations_mean = o.at("iterations_mean").get<double>();
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path, ResultFormat format) {
    const std::string text = format == ResultFormat::csv ? rows_to_csv(rows) : rows_to_json(rows).dump(2) + "\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig rc;
    reject_unknown(j, {"system", "power", "sweep"}, "root");
    if (j.contains("system")) {
        const auto& s = j.at("system");
        reject_unknown(s, {"M", "Nrf", "I", "K", "beta", "fc", "delta_f", "bandwidth", "b", "snr_db", "p", "L", "D0",
                           "rolloff", "gamma_source"},
                       "system");
        SystemConfig& c = rc.system;
        read_key(s, "M", c.M);
        read_key(s, "Nrf", c.Nrf);
        read_key(s, "I", c.I);
        read_key(s, "K", c.K);
        read_key(s, "beta", c.beta);
        read_key(s, "fc", c.fc);
        read_key(s, "delta_f", c.delta_f);
        read_key(s, "b", c.b);
        read_key(s, "snr_db", c.snr_db);
        read_key(s, "p", c.p);
        read_key(s, "L", c.L);
        read_key(s, "D0", c.D0);
        read_key(s, "rolloff", c.rolloff);
        if (s.contains("bandwidth")) {
            if (s.contains("delta_f")) throw std::invalid_argument("config: give either system.bandwidth or system.delta_f");
            c = with_bandwidth(c, s.at("bandwidth").get<double>());
        }
        if (s.contains("gamma_source")) {
            const auto g = s.at("gamma_source").get<std::string>();
            if (g == "lloyd_max") c.gamma_source = GammaSource::lloyd_max;
            else if (g == "fit") c.gamma_source = GammaSource::fit;
            else throw std::invalid_argument("config: gamma_source must be 'lloyd_max' or 'fit'");
        }
    }
    if (j.contains("power")) {
        const auto& s = j.at("power");
        reject_unknown(s, {"P_RF", "P_LNA", "P_SP", "P_C", "P_PS", "kappa"}, "power");
        read_key(s, "P_RF", rc.power.P_RF);
        read_key(s, "P_LNA", rc.power.P_LNA);
        read_key(s, "P_SP", rc.power.P_SP);
        read_key(s, "P_C", rc.power.P_C);
        read_key(s, "P_PS", rc.power.P_PS);
        read_key(s, "kappa", rc.power.kappa);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        reject_unknown(s, {"kind", "values", "bits", "receivers", "n_realizations", "master_seed", "mc_oracle", "mc_frames"},
                       "sweep");
        SweepSpec& w = rc.sweep;
        if (s.contains("kind")) w.kind = sweep_kind_from_string(s.at("kind").get<std::string>());
        read_key(s, "values", w.values);
        read_key(s, "bits", w.bits);
        if (s.contains("receivers")) {
            w.receivers.clear();
            for (const auto& r : s.at("receivers")) w.receivers.push_back(receiver_from_string(r.get<std::string>()));
        }
        read_key(s, "n_realizations", w.n_realizations);
        read_key(s, "master_seed", w.master_seed);
        read_key(s, "mc_oracle", w.mc_oracle);
        read_key(s, "mc_frames", w.mc_frames);
    }
    return rc;
}

nlohmann::json run_config_to_json(const RunConfig& rc) {
    const SystemConfig& c = rc.system;
    nlohmann::json receivers = nlohmann::json::array();
    for (Receiver r : rc.sweep.receivers) receivers.push_back(to_string(r));
    return {{"system",
             {{"M", c.M}, {"Nrf", c.Nrf}, {"I", c.I}, {"K", c.K}, {"beta", c.beta}, {"fc", c.fc}, {"delta_f", c.delta_f},
              {"b", c.b}, {"snr_db", c.snr_db}, {"p", c.p}, {"L", c.L}, {"D0", c.D0}, {"rolloff", c.rolloff},
              {"gamma_source", c.gamma_source == GammaSource::fit ? "fit" : "lloyd_max"}}},
            {"power",
             {{"P_RF", rc.power.P_RF}, {"P_LNA", rc.power.P_LNA}, {"P_SP", rc.power.P_SP}, {"P_C", rc.power.P_C},
              {"P_PS", rc.power.P_PS}, {"kappa", rc.power.kappa}}},
            {"sweep",
             {{"kind", to_string(rc.sweep.kind)}, {"values", rc.sweep.values}, {"bits", rc.sweep.bits},
              {"receivers", receivers}, {"n_realizations", rc.sweep.n_realizations},
              {"master_seed", rc.sweep.master_seed}, {"mc_oracle", rc.sweep.mc_oracle},
              {"mc_frames", rc.sweep.mc_frames}}}};
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config '" + path.string() + "': " + e.what());
    }
    return run_config_from_json(j);
}

}  // namespace hbrx
