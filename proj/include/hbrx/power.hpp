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

#include "hbrx/core.hpp"

namespace hbrx {

// Component powers in watts.
struct PowerParams {
    double P_RF = 43e-3;
    double P_LNA = 25e-3;
    double P_SP = 19.5e-3;
    double P_C = 19.5e-3;
    double P_PS = 23e-3;
    double kappa = 494e-15;  // J per conversion step (Walden figure of merit)

    void validate() const;
};

// P_ADC = kappa fs 2^b.
double adc_power(const PowerParams& pp, double fs, int b);

// M (P_LNA + P_RF + 2 P_ADC).
double power_fully_digital(const PowerParams& pp, const SystemConfig& config);

// M (P_LNA + P_SP + Nrf P_PS) + Nrf (P_RF + P_C + 2 P_ADC).
double power_hybrid(const PowerParams& pp, const SystemConfig& config);

// R / P in bit/s/Hz/W. Throws for non-positive power.
double energy_efficiency(double se, double power_w);

// R Bw / P in bit/J.
double energy_efficiency_bits_per_joule(double se, double power_w, double bandwidth_hz);

}  // namespace hbrx
