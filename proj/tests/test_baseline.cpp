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
#include <vector>

#include "tbf/baseline.hpp"

using namespace tbf;

namespace {

DatabaseEntry entry(const Vec3& p, std::initializer_list<double> f) {
    DatabaseEntry e;
    e.position = p;
    e.features = Eigen::VectorXd(Eigen::Index(f.size()));
    Eigen::Index i = 0;
    for (double v : f) e.features[i++] = v;
    return e;
}

}  // namespace

TEST_SUITE("baseline") {

TEST_CASE("row-major flattening") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    const auto v = flatten_row_major(m);
    for (int i = 0; i < 6; ++i) CHECK(v[i] == double(i + 1));
}

TEST_CASE("WKNN") {
    SUBCASE("exact match with k = 1") {
        FingerprintDatabase db;
        db.add(entry(Vec3(1, 2, 3), {0.1, 0.2}));
        db.add(entry(Vec3(4, 5, 6), {0.3, 0.9}));
        Eigen::VectorXd q(2);
        q << 0.3, 0.9;
        CHECK(wknn_locate(db, q, 1) == Vec3(4, 5, 6));
        CHECK(wknn_locate(db, q, 2) == Vec3(4, 5, 6));
    }
    SUBCASE("two equidistant neighbours with uniform weights") {
        FingerprintDatabase db;
        db.add(entry(Vec3(0, 0, 0), {1.0}));
        db.add(entry(Vec3(2, 0, 0), {-1.0}));
        db.add(entry(Vec3(9, 9, 9), {5.0}));
        Eigen::VectorXd q(1);
        q << 0.0;
        const Vec3 r = wknn_locate(db, q, 2, Weighting::Uniform);
        CHECK((r - Vec3(1, 0, 0)).norm() < 1e-15);
    }
    SUBCASE("inverse-distance weights") {
        FingerprintDatabase db;
        db.add(entry(Vec3(0, 0, 0), {1.0, 0.0}));
        db.add(entry(Vec3(3, 0, 0), {0.0, 2.0}));
        db.add(entry(Vec3(0, 3, 0), {-2.0, 0.0}));
        db.add(entry(Vec3(50, 50, 0), {10.0, 10.0}));
        Eigen::VectorXd q(2);
        q << 0.0, 0.0;
        // Distances (1, 2, 2), weights (1, 0.5, 0.5).
        const Vec3 r = wknn_locate(db, q, 3);
        CHECK((r - Vec3(0.75, 0.75, 0.0)).norm() < 1e-12);
    }
    SUBCASE("errors") {
        FingerprintDatabase db;
        Eigen::VectorXd q(1);
        q << 0.0;
        CHECK_THROWS_AS(wknn_locate(db, q, 1), ParameterError);
        db.add(entry(Vec3(0, 0, 0), {1.0}));
        CHECK_THROWS_AS(wknn_locate(db, q, 2), ParameterError);
        CHECK_THROWS_AS(wknn_locate(db, Eigen::VectorXd(Eigen::VectorXd::Zero(2)), 1), ShapeError);
        CHECK_THROWS_AS(db.add(entry(Vec3(0, 0, 0), {1.0, 2.0})), ShapeError);
    }
    CHECK(parse_weighting("uniform") == Weighting::Uniform);
    CHECK(parse_weighting("inverse_distance") == Weighting::InverseDistance);
    CHECK_THROWS_AS(parse_weighting("gauss"), ParameterError);
}

TEST_CASE("localization report") {
    const Vec3 bs(0, 0, 25);
    SUBCASE("perfect estimates") {
        const std::vector<Vec3> t{Vec3(1, 1, 1.5), Vec3(-3, 2, 1.5)};
        const auto r = eval_localization(t, t, bs);
        CHECK(r.mean_error == 0.0);
        REQUIRE(r.cdf_points.size() == 1);
        CHECK(r.cdf_points[0].first == 0.0);
        CHECK(r.cdf_points[0].second == 1.0);
    }
    SUBCASE("3-4-5 triangle") {
        const std::vector<Vec3> t{Vec3(0, 0, 1.5)};
        const std::vector<Vec3> e{Vec3(3, 4, 1.5)};
        const auto r = eval_localization(e, t, bs);
        CHECK(r.errors[0] == doctest::Approx(5.0));
        CHECK(r.mean_error == doctest::Approx(5.0));
    }
    SUBCASE("buckets are left-closed on horizontal distance") {
        const std::vector<Vec3> t{Vec3(5, 0, 1.5), Vec3(3, 0, 1.5), Vec3(0, 25, 1.5)};
        const std::vector<Vec3> e{Vec3(5, 1, 1.5), Vec3(3, 3, 1.5), Vec3(0, 25, 1.5)};
        const auto r = eval_localization(e, t, bs);
        REQUIRE(r.range_buckets.size() == 5);
        CHECK(r.range_buckets[0].label() == "0-5");
        CHECK(r.range_buckets[1].label() == "5-10");
        CHECK(r.range_buckets[4].label() == "20+");
        CHECK(r.range_buckets[0].count == 1);
        CHECK(r.range_buckets[0].mean_error == doctest::Approx(3.0));
        CHECK(r.range_buckets[1].count == 1);
        CHECK(r.range_buckets[1].mean_error == doctest::Approx(1.0));
        CHECK(r.range_buckets[4].count == 1);
        CHECK(std::isnan(r.range_buckets[2].mean_error));
    }
    SUBCASE("CDF over distinct errors") {
        const std::vector<Vec3> t{Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)};
        const std::vector<Vec3> e{Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(1, 0, 0), Vec3(4, 0, 0)};
        const auto r = eval_localization(e, t, bs);
        REQUIRE(r.cdf_points.size() == 3);
        CHECK(r.cdf_points[0] == std::pair<double, double>{1.0, 0.5});
        CHECK(r.cdf_points[1] == std::pair<double, double>{2.0, 0.75});
        CHECK(r.cdf_points[2] == std::pair<double, double>{4.0, 1.0});
    }
    SUBCASE("length mismatch") {
        const std::vector<Vec3> t{Vec3(0, 0, 0)};
        const std::vector<Vec3> e;
        CHECK_THROWS_AS(eval_localization(e, t, bs), ShapeError);
    }
}

TEST_CASE("orientation report") {
    std::vector<std::size_t> truth, pred;
    for (std::size_t i = 0; i < 64; ++i) truth.push_back(i % 16);
    SUBCASE("perfect") {
        const auto r = eval_orientation(truth, truth);
        CHECK(r.accuracy == 1.0);
        for (std::size_t k = 0; k < 16; ++k) CHECK(r.recall[k][k] == 1.0);
    }
    SUBCASE("constant class") {
        pred.assign(64, 0);
        const auto r = eval_orientation(pred, truth);
        CHECK(r.accuracy == doctest::Approx(1.0 / 16.0));
        // Of 60 errors, truths 1 and 15 are one class away: 8 of them.
        CHECK(r.adjacency_share == doctest::Approx(8.0 / 60.0));
    }
    SUBCASE("reference accuracy") {
        std::vector<std::size_t> t(19840), p(19840);
        for (std::size_t i = 0; i < t.size(); ++i) {
            t[i] = i % 16;
            p[i] = i < 14724 ? t[i] : (t[i] + 1) % 16;
        }
        const auto r = eval_orientation(p, t);
        CHECK(r.correct == 14724);
        CHECK(r.accuracy == doctest::Approx(0.742).epsilon(5e-4));
    }
    SUBCASE("out of range") {
        std::vector<std::size_t> bad{16};
        std::vector<std::size_t> ok{0};
        CHECK_THROWS_AS(eval_orientation(bad, ok), ParameterError);
    }
}

}  // TEST_SUITE
