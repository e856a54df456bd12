# SPDX-License-Identifier: Apache-2.0
#
# hbrx: hybrid receiver design for low-resolution massive MIMO-OFDM
# Copyright (C) 2026 The hbrx Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Hybrid receiver design for low-resolution massive MIMO-OFDM."""

from ._core import (
    CSV_HEADER,
    ChannelRealization,
    DesignResult,
    GammaSource,
    HybridCombiner,
    PowerParams,
    ScalarQuantizer,
    SystemConfig,
    adc_power,
    design_fully_digital_mmse,
    design_hybrid,
    design_svd_hybrid,
    draw_channel,
    energy_efficiency,
    gamma_fit,
    lloyd_max,
    power_fully_digital,
    power_hybrid,
    run_sweep,
    validate,
)

__all__ = [
    "CSV_HEADER",
    "ChannelRealization",
    "DesignResult",
    "GammaSource",
    "HybridCombiner",
    "PowerParams",
    "ScalarQuantizer",
    "SystemConfig",
    "adc_power",
    "design_fully_digital_mmse",
    "design_hybrid",
    "design_svd_hybrid",
    "draw_channel",
    "energy_efficiency",
    "gamma_fit",
    "lloyd_max",
    "power_fully_digital",
    "power_hybrid",
    "run_sweep",
    "validate",
]
