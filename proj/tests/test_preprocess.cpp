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
#include "tbf/preprocess.hpp"
#include "tbf/scene.hpp"

using namespace tbf;

namespace {

Tbf blank(std::size_t a, std::size_t g, std::size_t f) { return Tbf{RTensor3(a, g, f), {}}; }

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("angle-delay aggregation") {
    SUBCASE("one-hot fingerprint") {
        Tbf f = blank(4, 3, 2);
        f.data(2, 1, 1) = 7.0;
        const auto x = angle_delay(f);
        CHECK(x(2, 1) == 1.0);
        CHECK(x.sum() == 1.0);
    }
    SUBCASE("two Doppler slices with the same pattern") {
        Tbf one = blank(3, 2, 4);
        Tbf two = blank(3, 2, 4);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t g = 0; g < 2; ++g) {
                const double v = double(a + 2 * g + 1);
                one.data(a, g, 1) = v;
                two.data(a, g, 1) = v;
                two.data(a, g, 3) = 0.25 * v;
            }
        CHECK((angle_delay(one) - angle_delay(two)).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("zero fingerprint") { CHECK_THROWS_AS(angle_delay(blank(2, 2, 2)), DegenerateInputError); }
}

TEST_CASE("mask") {
    Eigen::MatrixXd x(2, 2);
    x << 0.6, 0.4, 0.0, 0.0;
    const auto m = mask(x, 0.5);
    CHECK(m(0, 0) == 1);
    CHECK(m(0, 1) == 0);
    CHECK(m(1, 0) == 0);
    CHECK(m(1, 1) == 0);
    CHECK(mask(x, 0.0).cast<int>().sum() == 4);
    CHECK(mask(x, 0.4)(0, 1) == 1);  // threshold is inclusive
    CHECK_THROWS_AS(mask(x, -0.1), ParameterError);
    CHECK_THROWS_AS(mask(x, 1.5), ParameterError);

    Eigen::MatrixXd r = Eigen::MatrixXd::Random(6, 5).cwiseAbs();
    r /= r.sum();
    const auto lo = mask(r, 0.02);
    const auto hi = mask(r, 0.04);
    for (Eigen::Index i = 0; i < r.size(); ++i) CHECK(hi(i) <= lo(i));
}

TEST_CASE("Doppler profile") {
    Tbf f = blank(2, 2, 4);
    f.data(1, 0, 2) = 3.0;
    const auto d = doppler(f);
    CHECK(d.size() == 4);
    CHECK(d[2] == 1.0);
    CHECK(d.sum() == 1.0);

    SUBCASE("stationary UT concentrates at the centre bin") {
        SceneConfig c;
        c.seed = 3;
        UtState ut;
        ut.position = Vec3(2.0, 9.0, 1.5);
        ut.speed = 0.0;
        const auto geom = test::desk_geometry();
        const auto cfg = test::desk_ofdm();
        const auto mp = multipath_for(build_scene(c), ut, geom, cfg).set;
        const auto x = doppler(tbf_exact(mp, geom, cfg));
        CHECK(x[Eigen::Index(cfg.slots_per_frame / 2)] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("preprocess bundles normalized inputs") {
    SceneConfig c;
    c.seed = 8;
    UtState ut;
    ut.position = Vec3(-5.0, 1.0, 1.5);
    ut.heading = 1.0;
    const auto geom = test::desk_geometry();
    const auto cfg = test::desk_ofdm();
    const auto f = tbf_exact(multipath_for(build_scene(c), ut, geom, cfg).set, geom, cfg);
    const auto p = preprocess(f, 0.1);
    CHECK(p.x_ad.rows() == 16);
    CHECK(p.x_ad.cols() == 18);
    CHECK(p.x_ad.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.x_do.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.gamma == 0.1);
    CHECK(p.x_ma == mask(p.x_ad, 0.1));
}

}  // TEST_SUITE
