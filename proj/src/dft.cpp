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

#include "dft.hpp"

#include <unsupported/Eigen/FFT>

namespace hbrx::detail {

namespace {

Eigen::FFT<double>& engine() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

CMat transform_rows(const CMat& x, double scale, bool inverse) {
    const Eigen::Index n = x.cols();
    CMat out(x.rows(), n);
    std::vector<cd> in(static_cast<size_t>(n)), res(static_cast<size_t>(n));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < n; ++c) in[static_cast<size_t>(c)] = x(r, c);
        if (inverse)
            engine().inv(res.data(), in.data(), n);
        else
            engine().fwd(res.data(), in.data(), n);
        for (Eigen::Index c = 0; c < n; ++c) out(r, c) = scale * res[static_cast<size_t>(c)];
    }
    return out;
}

}  // namespace

CMat dft_rows(const CMat& x, double scale) { return transform_rows(x, scale, false); }
CMat idft_rows(const CMat& x, double scale) { return transform_rows(x, scale, true); }

std::vector<cd> dft(const std::vector<cd>& x, int n) {
    std::vector<cd> in(static_cast<size_t>(n), cd{0.0, 0.0});
    std::copy_n(x.begin(), std::min<size_t>(x.size(), static_cast<size_t>(n)), in.begin());
    std::vector<cd> out(static_cast<size_t>(n));
    engine().fwd(out.data(), in.data(), n);
    return out;
}

}  // namespace hbrx::detail
