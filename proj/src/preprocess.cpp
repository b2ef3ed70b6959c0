// SPDX-License-Identifier: Apache-2.0
//
// tbf-engine: triple-beam fingerprint engine for massive MIMO-OFDM localization
// Copyright (C) 2026 The tbf-engine authors
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

#include "tbf/preprocess.hpp"

#include <cmath>

#include "tbf/errors.hpp"

namespace tbf {

Eigen::MatrixXd angle_delay(const Tbf& f) {
    const auto a = Eigen::Index(f.data.extent(0));
    const auto g = Eigen::Index(f.data.extent(1));
    const std::size_t nf = f.data.extent(2);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(a, g);
    for (Eigen::Index i = 0; i < a; ++i)
        for (Eigen::Index j = 0; j < g; ++j)
            for (std::size_t n = 0; n < nf; ++n) x(i, j) += f.data(std::size_t(i), std::size_t(j), n);
    const double s = x.sum();
    if (!(s > 0.0)) throw DegenerateInputError("angle_delay of a zero fingerprint");
    return x / s;
}

BinaryMatrix mask(const Eigen::MatrixXd& x_ad, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in [0, 1]");
    return (x_ad.array() >= gamma).cast<std::uint8_t>().matrix();
}

Eigen::VectorXd doppler(const Tbf& f) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(Eigen::Index(f.data.extent(2)));
    for (std::size_t i = 0; i < f.data.extent(0); ++i)
        for (std::size_t j = 0; j < f.data.extent(1); ++j)
            for (std::size_t n = 0; n < f.data.extent(2); ++n) x[Eigen::Index(n)] += f.data(i, j, n);
    const double s = x.sum();
    if (!(s > 0.0)) throw DegenerateInputError("doppler of a zero fingerprint");
    return x / s;
}

PreprocessedInputs preprocess(const Tbf& f, double gamma) {
    PreprocessedInputs p;
    p.x_ad = angle_delay(f);
    p.x_ma = mask(p.x_ad, gamma);
    p.x_do = doppler(f);
    p.gamma = gamma;
    return p;
}

}  // namespace tbf
