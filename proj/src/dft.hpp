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

namespace hbrx::detail {

// Transforms along the column index of `x` (one series per row):
//   forward:  X(:, k) = scale * sum_n x(:, n) exp(-j 2 pi n k / N)
//   inverse:  x(:, n) = scale * sum_k X(:, k) exp(+j 2 pi n k / N)
CMat dft_rows(const CMat& x, double scale);
CMat idft_rows(const CMat& x, double scale);

// Forward transform of a single zero-padded series of length n.
std::vector<cd> dft(const std::vector<cd>& x, int n);

}  // namespace hbrx::detail
