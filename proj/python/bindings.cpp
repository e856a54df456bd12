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

// Python bindings: configuration, quantizer, channel draws, the three
// receivers, sweeps and the validation suite.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hbrx/analysis.hpp"
#include "hbrx/channel.hpp"
#include "hbrx/harness.hpp"
#include "hbrx/optimizer.hpp"
#include "hbrx/power.hpp"
#include "hbrx/quantizer.hpp"
#include "hbrx/results_io.hpp"

namespace py = pybind11;
using namespace hbrx;

namespace {

py::dict row_to_dict(const ResultRow& r) {
    py::dict d;
    d["sweep_kind"] = r.sweep_kind;
    d["sweep_value"] = r.sweep_value;
    d["receiver"] = r.receiver;
    d["b"] = r.b;
    d["beta"] = r.beta;
    d["se_mean"] = r.se_mean;
    d["se_stderr"] = r.se_stderr;
    d["ee"] = r.ee;
    d["n_realizations"] = r.n_realizations;
    d["wall_time_s"] = r.wall_time_s;
    d["iterations_mean"] = r.iterations_mean;
    return d;
}

ChannelRealization draw_channel(const SystemConfig& c, std::uint64_t seed, std::uint64_t realization) {
    RngStream rng(seed, realization);
    return freq_channel(draw_paths(c, rng), c);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hybrid receiver design for low-resolution massive MIMO-OFDM";

    py::enum_<GammaSource>(m, "GammaSource").value("lloyd_max", GammaSource::lloyd_max).value("fit", GammaSource::fit);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("M", &SystemConfig::M)
        .def_readwrite("Nrf", &SystemConfig::Nrf)
        .def_readwrite("I", &SystemConfig::I)
        .def_readwrite("K", &SystemConfig::K)
        .def_readwrite("beta", &SystemConfig::beta)
        .def_readwrite("fc", &SystemConfig::fc)
        .def_readwrite("delta_f", &SystemConfig::delta_f)
        .def_readwrite("b", &SystemConfig::b)
        .def_readwrite("snr_db", &SystemConfig::snr_db)
        .def_readwrite("p", &SystemConfig::p)
        .def_readwrite("L", &SystemConfig::L)
        .def_readwrite("D0", &SystemConfig::D0)
        .def_readwrite("rolloff", &SystemConfig::rolloff)
        .def_readwrite("gamma_source", &SystemConfig::gamma_source)
        .def("derive", [](const SystemConfig& c) {
            const DerivedScalars d = derive(c);
            py::dict out;
            out["Nc"] = d.Nc;
            out["fs"] = d.fs;
            out["Bw"] = d.Bw;
            out["D0"] = d.D0;
            out["D"] = d.D;
            out["sigma2"] = d.sigma2;
            out["rho"] = d.rho;
            return out;
        })
        .def("with_bandwidth", [](const SystemConfig& c, double bw) { return with_bandwidth(c, bw); });

    py::class_<ScalarQuantizer>(m, "ScalarQuantizer")
        .def_readonly("bits", &ScalarQuantizer::bits)
        .def_readonly("levels", &ScalarQuantizer::levels)
        .def_readonly("thresholds", &ScalarQuantizer::thresholds)
        .def_readonly("gamma", &ScalarQuantizer::gamma)
        .def_readonly("alpha", &ScalarQuantizer::alpha)
        .def("apply", &ScalarQuantizer::apply);
    m.def("lloyd_max", [](int b) { return lloyd_max(b); }, py::arg("b"));
    m.def("gamma_fit", &gamma_fit, py::arg("b"));

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def_property_readonly("K", [](const ChannelRealization& ch) { return ch.K; })
        .def_property_readonly("Nc", &ChannelRealization::Nc)
        .def_property_readonly("M", &ChannelRealization::M)
        .def_property_readonly("I", &ChannelRealization::I)
        .def("H", [](const ChannelRealization& ch, int k) {
            if (k < 0 || k >= ch.Nc()) throw py::index_error("subcarrier out of range");
            return ch.freq[static_cast<size_t>(k)];
        });
    m.def("draw_channel", &draw_channel, py::arg("config"), py::arg("seed"), py::arg("realization") = 0,
          "Channel of one realization, drawn exactly as the sweeps draw it.");

    py::class_<HybridCombiner>(m, "HybridCombiner")
        .def_readonly("Urf", &HybridCombiner::Urf)
        .def_readonly("Ubb", &HybridCombiner::Ubb);
    py::class_<DesignResult>(m, "DesignResult")
        .def_readonly("combiner", &DesignResult::combiner)
        .def_readonly("se", &DesignResult::se)
        .def_readonly("se_trace", &DesignResult::se_trace)
        .def_property_readonly("iterations", [](const DesignResult& r) { return r.iterations.size(); });
    m.def("design_hybrid", [](const ChannelRealization& ch, const SystemConfig& c) {
        py::gil_scoped_release release;
        return design_hybrid(ch, c);
    });
    m.def("design_svd_hybrid", [](const ChannelRealization& ch, const SystemConfig& c) {
        py::gil_scoped_release release;
        return design_svd_hybrid(ch, c);
    });
    m.def("design_fully_digital_mmse", [](const ChannelRealization& ch, const SystemConfig& c) {
        py::gil_scoped_release release;
        return design_fully_digital_mmse(ch, c).se;
    }, "Spectral efficiency of the fully digital MMSE receiver.");

    py::class_<PowerParams>(m, "PowerParams")
        .def(py::init<>())
        .def_readwrite("P_RF", &PowerParams::P_RF)
        .def_readwrite("P_LNA", &PowerParams::P_LNA)
        .def_readwrite("P_SP", &PowerParams::P_SP)
        .def_readwrite("P_C", &PowerParams::P_C)
        .def_readwrite("P_PS", &PowerParams::P_PS)
        .def_readwrite("kappa", &PowerParams::kappa);
    m.def("adc_power", &adc_power);
    m.def("power_hybrid", &power_hybrid);
    m.def("power_fully_digital", &power_fully_digital);
    m.def("energy_efficiency", &energy_efficiency);

    m.attr("CSV_HEADER") = kCsvHeader;
    m.def(
        "run_sweep",
        [](const std::string& kind, const std::vector<double>& values, const SystemConfig& c, const std::vector<int>& bits,
           const std::vector<std::string>& receivers, int n_realizations, std::uint64_t seed, bool mc_oracle, int workers,
           const PowerParams& power) {
            SweepSpec spec;
            spec.kind = sweep_kind_from_string(kind);
            spec.values = values;
            spec.bits = bits;
            if (!receivers.empty()) {
                spec.receivers.clear();
                for (const auto& r : receivers) spec.receivers.push_back(receiver_from_string(r));
            }
            spec.n_realizations = n_realizations;
            spec.master_seed = seed;
            spec.mc_oracle = mc_oracle;
            SweepOptions opts;
            opts.workers = workers;
            SweepResult res;
            {
                py::gil_scoped_release release;
                res = run_sweep(spec, c, power, opts);
            }
            py::list rows;
            for (const auto& r : res.rows) rows.append(row_to_dict(r));
            return rows;
        },
        py::arg("kind"), py::arg("values"), py::arg("config") = SystemConfig{}, py::arg("bits") = std::vector<int>{},
        py::arg("receivers") = std::vector<std::string>{}, py::arg("n_realizations") = 10, py::arg("seed") = 1,
        py::arg("mc_oracle") = false, py::arg("workers") = 1, py::arg("power") = PowerParams{},
        "Monte Carlo sweep; returns one dict per CSV row.");

    m.def(
        "validate",
        [](const SystemConfig& c, int n_instances, int n_frames, std::uint64_t seed) {
            ValidateOptions o;
            o.n_instances = n_instances;
            o.n_frames = n_frames;
            o.seed = seed;
            ValidationReport rep;
            {
                py::gil_scoped_release release;
                rep = validate(c, o);
            }
            py::list items;
            for (const auto& it : rep.items) {
                py::dict d;
                d["name"] = it.name;
                d["measured"] = it.measured;
                d["threshold"] = it.threshold;
                d["passed"] = it.passed;
                d["detail"] = it.detail;
                items.append(d);
            }
            return items;
        },
        py::arg("config"), py::arg("n_instances") = 4, py::arg("n_frames") = 500, py::arg("seed") = 1);
}
