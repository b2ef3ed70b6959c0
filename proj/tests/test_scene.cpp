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

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tbf/analysis.hpp"
#include "tbf/scene.hpp"

using namespace tbf;
using tbf::test::desk_geometry;
using tbf::test::desk_ofdm;

namespace {

Scene one_scatterer(const Vec3& s) {
    Scene sc;
    sc.bs_position = Vec3(0.0, 0.0, 25.0);
    sc.scatterers.push_back(s);
    sc.extent = 20.0;
    return sc;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("scene construction is seeded") {
    SceneConfig c;
    c.seed = 5;
    const Scene a = build_scene(c);
    const Scene b = build_scene(c);
    REQUIRE(a.scatterers.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(a.scatterers[i] == b.scatterers[i]);
    c.seed = 6;
    CHECK(build_scene(c).scatterers[0] != a.scatterers[0]);
    for (const Vec3& s : a.scatterers) {
        CHECK(std::fabs(s.x()) <= c.shell_half_width);
        CHECK(s.z() >= c.scatterer_z_min);
        CHECK(s.z() <= c.scatterer_z_max);
    }
}

TEST_CASE("scene config validation") {
    SceneConfig c;
    c.n_scatterers = 0;
    CHECK_THROWS_AS(build_scene(c), ParameterError);
    c.include_los = true;
    CHECK_NOTHROW(build_scene(c));
    c.shell_half_width = 100.0;
    CHECK_THROWS_AS(build_scene(c), ParameterError);
}

TEST_CASE("path counts follow the scatterer count") {
    SceneConfig c;
    c.seed = 2;
    const Scene s = build_scene(c);
    UtState ut;
    ut.position = Vec3(3.0, -7.0, 1.5);
    const auto r = multipath_for(s, ut, desk_geometry(), desk_ofdm());
    CHECK(r.set.size() + r.dropped == 12);
    CHECK(r.set.total_power() == doctest::Approx(1.0).epsilon(1e-12));

    c.include_los = true;
    CHECK(multipath_for(build_scene(c), ut, desk_geometry(), desk_ofdm()).set.size() == 13);

    c.n_scatterers = 0;
    CHECK(multipath_for(build_scene(c), ut, desk_geometry(), desk_ofdm()).set.size() == 1);
}

TEST_CASE("Doppler of a UT heading straight at its scatterer") {
    const Scene s = one_scatterer(Vec3(10.0, 0.0, 1.5));
    UtState ut;
    ut.position = Vec3(0.0, 0.0, 1.5);
    ut.speed = 5.0 / 3.6;
    ut.heading = 0.0;
    const auto geom = desk_geometry();
    const auto r = multipath_for(s, ut, geom, desk_ofdm());
    REQUIRE(r.set.size() == 1);
    CHECK(geom.wavelength == doctest::Approx(0.051688).epsilon(1e-5));
    CHECK(r.set.paths[0].doppler == doctest::Approx(26.87).epsilon(1e-3));
    CHECK(r.set.paths[0].delay ==
          doctest::Approx((10.0 + std::sqrt(100.0 + 23.5 * 23.5)) / kSpeedOfLight).epsilon(1e-12));

    ut.speed = 0.0;
    CHECK(multipath_for(s, ut, geom, desk_ofdm()).set.paths[0].doppler == 0.0);
}

TEST_CASE("mirrored scene gives mirrored azimuths") {
    SceneConfig c;
    c.seed = 9;
    const Scene s = build_scene(c);
    Scene m = s;
    for (Vec3& v : m.scatterers) v.x() = -v.x();
    UtState ut;
    ut.position = Vec3(4.0, 6.0, 1.5);
    ut.heading = 0.3;
    UtState um = ut;
    um.position.x() = -ut.position.x();
    um.heading = kPi - ut.heading;
    const auto a = multipath_for(s, ut, desk_geometry(), desk_ofdm()).set;
    const auto b = multipath_for(m, um, desk_geometry(), desk_ofdm()).set;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b.paths[i].azimuth == doctest::Approx(kPi - a.paths[i].azimuth).epsilon(1e-12));
        CHECK(b.paths[i].elevation == doctest::Approx(a.paths[i].elevation).epsilon(1e-12));
        CHECK(b.paths[i].delay == doctest::Approx(a.paths[i].delay).epsilon(1e-12));
        CHECK(b.paths[i].doppler == doctest::Approx(a.paths[i].doppler).epsilon(1e-9));
    }
}

TEST_CASE("multipath mapping is bitwise deterministic") {
    SceneConfig c;
    c.seed = 4;
    UtState ut;
    ut.position = Vec3(-12.0, 3.0, 1.5);
    ut.heading = 2.0;
    const auto a = multipath_for(build_scene(c), ut, desk_geometry(), desk_ofdm()).set;
    const auto b = multipath_for(build_scene(c), ut, desk_geometry(), desk_ofdm()).set;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.paths[i].delay == b.paths[i].delay);
        CHECK(a.paths[i].doppler == b.paths[i].doppler);
        CHECK(a.paths[i].azimuth == b.paths[i].azimuth);
        CHECK(a.paths[i].gain_variance == b.paths[i].gain_variance);
    }
}

TEST_CASE("all paths beyond the cyclic prefix") {
    const Scene s = one_scatterer(Vec3(900.0, 0.0, 1.5));
    UtState ut;
    CHECK_THROWS_AS(multipath_for(s, ut, desk_geometry(), desk_ofdm()), DegenerateInputError);
}

TEST_CASE("UT outside the sampling area") {
    const Scene s = one_scatterer(Vec3(5.0, 0.0, 1.5));
    UtState ut;
    ut.position = Vec3(25.0, 0.0, 1.5);
    CHECK_THROWS_AS(multipath_for(s, ut, desk_geometry(), desk_ofdm()), ParameterError);
}

TEST_CASE("snapping puts every path on the grid") {
    SceneConfig c;
    c.seed = 1;
    UtState ut;
    ut.position = Vec3(7.0, 2.0, 1.5);
    const auto geom = desk_geometry();
    const auto cfg = desk_ofdm();
    const auto mp = multipath_for(build_scene(c), ut, geom, cfg).set;
    const auto snapped = snap_to_grid(mp, geom, cfg);
    REQUIRE(snapped.size() == mp.size());
    for (const auto& b : theorem1_indices(snapped, geom, cfg).paths) CHECK(b.on_grid());
}

TEST_CASE("direction classes") {
    CHECK(direction_class(0.0) == 0);
    CHECK(direction_class(kPi / 4.0) == 2);
    CHECK(direction_class(15.0 * kPi / 8.0) == 15);
    CHECK(direction_class(-kPi / 32.0) == 0);
    CHECK(direction_class(kPi / 16.0) == 1);  // left-closed
    CHECK(direction_class(2.0 * kPi) == 0);
    for (std::size_t k = 0; k < kDirectionClasses; ++k) CHECK(direction_class(class_heading(k)) == k);
    CHECK_THROWS_AS(class_heading(16), ParameterError);
    CHECK(wrap_angle(-kPi / 2.0) == doctest::Approx(1.5 * kPi));
}

}  // TEST_SUITE
