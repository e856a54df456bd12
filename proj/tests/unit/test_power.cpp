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

#include "hbrx/power.hpp"

using namespace hbrx;

TEST_CASE("ADC power follows the figure of merit") {
    const PowerParams pp;
    CHECK(adc_power(pp, 12.8e9, 1) == doctest::Approx(12.646e-3).epsilon(1e-4));
    CHECK(adc_power(pp, 12.8e9, 4) == doctest::Approx(8.0 * adc_power(pp, 12.8e9, 1)));
    CHECK(adc_power(pp, 2 * 12.8e9, 3) == doctest::Approx(2.0 * adc_power(pp, 12.8e9, 3)));
}

TEST_CASE("receiver power budgets") {
    const PowerParams pp;
    SystemConfig c;
    c.b = 1;
    const double padc = adc_power(pp, 12.8e9, 1);
    // Hand-expanded budgets for the default array.
    CHECK(power_fully_digital(pp, c) == doctest::Approx(128 * (25e-3 + 43e-3 + 2 * padc)));
    CHECK(power_fully_digital(pp, c) == doctest::Approx(11.94).epsilon(5e-4));
    c.b = 4;
    const double padc4 = adc_power(pp, 12.8e9, 4);
    CHECK(power_hybrid(pp, c) == doctest::Approx(128 * (25e-3 + 19.5e-3 + 4 * 23e-3) + 4 * (43e-3 + 19.5e-3 + 2 * padc4)));
    CHECK(power_hybrid(pp, c) == doctest::Approx(18.53).epsilon(5e-4));
}

TEST_CASE("energy efficiency") {
    CHECK(energy_efficiency(10.0, 2.0) == doctest::Approx(5.0));
    CHECK(energy_efficiency_bits_per_joule(10.0, 2.0, 1e9) == doctest::Approx(5e9));
    CHECK_THROWS(energy_efficiency(1.0, 0.0));
    PowerParams bad;
    bad.kappa = -1.0;
    CHECK_THROWS(bad.validate());
}
