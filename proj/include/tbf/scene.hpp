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

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tbf/channel_model.hpp"

namespace tbf {

using Vec3 = Eigen::Vector3d;

struct SceneConfig {
    Vec3 bs_position{0.0, 0.0, 25.0};
    std::size_t n_scatterers = 12;
    double extent = 20.0;              // half-width of the square sampling area [m]
    double shell_half_width = 30.0;    // scatterers are drawn in [-w, w]^2 horizontally
    double scatterer_z_min = 0.0;
    double scatterer_z_max = 15.0;
    double path_loss_exponent = 2.0;
    bool include_los = false;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Scene {
    Vec3 bs_position;
    std::vector<Vec3> scatterers;
    double extent = 20.0;
    double path_loss_exponent = 2.0;
    std::uint64_t seed = 0;
    bool include_los = false;
};

Scene build_scene(const SceneConfig& config);

struct UtState {
    Vec3 position{0.0, 0.0, 1.5};
    double speed = 5.0 / 3.6;  // m/s
    double heading = 0.0;      // radians in [0, 2 pi)
};

struct MultipathResult {
    MultipathSet set;
    std::size_t dropped = 0;  // single-bounce paths removed for exceeding the cyclic prefix
};

// Single-bounce geometry: delay from path length, DOA at the BS array (X-Z plane), Doppler from the
// projection of the UT velocity on its departure direction, power ~ length^-eta normalized to 1.
MultipathResult multipath_for(const Scene& scene, const UtState& ut, const ArrayGeometry& geom,
                              const OfdmConfig& cfg);

// Rounds every path parameter to the nearest TB bin (angle, delay, Doppler).
MultipathSet snap_to_grid(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg);

inline constexpr std::size_t kDirectionClasses = 16;

// Class i covers [(2i-1) pi/16, (2i+1) pi/16) modulo 2 pi.
std::size_t direction_class(double heading);
double class_heading(std::size_t cls);
double wrap_angle(double a);  // into [0, 2 pi)

}  // namespace tbf
