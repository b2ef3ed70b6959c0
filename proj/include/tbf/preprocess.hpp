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

#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "tbf/fingerprint.hpp"

namespace tbf {

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kDefaultGamma = 0.05;

struct PreprocessedInputs {
    Eigen::MatrixXd x_ad;  // A x N_g, unit sum
    BinaryMatrix x_ma;     // A x N_g
    Eigen::VectorXd x_do;  // N_f, unit sum
    double gamma = kDefaultGamma;
};

// Doppler-aggregated angle-delay map normalized to unit sum.
Eigen::MatrixXd angle_delay(const Tbf& f);

// [x_ad >= gamma]; gamma must lie in [0, 1].
BinaryMatrix mask(const Eigen::MatrixXd& x_ad, double gamma);

// Angle/delay-aggregated Doppler profile normalized to unit sum.
Eigen::VectorXd doppler(const Tbf& f);

PreprocessedInputs preprocess(const Tbf& f, double gamma = kDefaultGamma);

}  // namespace tbf
