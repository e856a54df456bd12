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

#include "hbrx/power.hpp"

#include <cmath>
#include <stdexcept>

namespace hbrx {

void PowerParams::validate() const {
    for (double v : {P_RF, P_LNA, P_SP, P_C, P_PS, kappa})
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("PowerParams: component powers must be finite and non-negative");
}

double adc_power(const PowerParams& pp, double fs, int b) {
    if (b < 1) throw std::invalid_argument("adc_power: b must be positive");
    if (!(fs > 0.0)) throw std::invalid_argument("adc_power: sampling rate must be positive");
    return pp.kappa * fs * std::ldexp(1.0, b);
}

double power_fully_digital(const PowerParams& pp, const SystemConfig& config) {
    pp.validate();
    const DerivedScalars d = derive(config);
    return config.M * (pp.P_LNA + pp.P_RF + 2.0 * adc_power(pp, d.fs, config.b));
}

double power_hybrid(const PowerParams& pp, const SystemConfig& config) {
    pp.validate();
    const DerivedScalars d = derive(config);
    return config.M * (pp.P_LNA + pp.P_SP + config.Nrf * pp.P_PS) +
           config.Nrf * (pp.P_RF + pp.P_C + 2.0 * adc_power(pp, d.fs, config.b));
}

double energy_efficiency(double se, double power_w) {
    if (!(power_w > 0.0)) throw std::invalid_argument("energy_efficiency: power must be positive");
    return se / power_w;
}

double energy_efficiency_bits_per_joule(double se, double power_w, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("energy_efficiency: bandwidth must be positive");
    return energy_efficiency(se, power_w) * bandwidth_hz;
}

}  // namespace hbrx
