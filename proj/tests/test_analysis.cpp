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

#include "helpers.hpp"
#include "tbf/analysis.hpp"
#include "tbf/beamspace.hpp"

using namespace tbf;
using tbf::test::ofdm;

namespace {

// Signed Dirichlet kernel from the finite geometric sum (1/L) sum_m exp(i 2 pi x m).
double geometric_dirichlet(std::size_t l, double x) {
    cplx s{0.0, 0.0};
    for (std::size_t m = 0; m < l; ++m) s += std::polar(1.0, 2.0 * kPi * x * double(m));
    s /= double(l);
    return std::real(s * std::polar(1.0, -kPi * x * double(l - 1)));
}

Eigen::Index argmax_abs(const Eigen::VectorXcd& v) {
    Eigen::Index i = 0;
    v.cwiseAbs().maxCoeff(&i);
    return i;
}

RTensor3 tensor_with(std::size_t i, double v) {
    RTensor3 t(2, 2, 2);
    t.flat()[i] = v;
    return t;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("Dirichlet kernel") {
    CHECK(dirichlet(4, 0.125) == doctest::Approx(1.0 / (4.0 * std::sin(kPi / 8.0))).epsilon(1e-14));
    CHECK(dirichlet(4, 0.125) == doctest::Approx(0.65328).epsilon(1e-5));
    for (std::size_t l : {1u, 2u, 3u, 4u, 7u, 16u})
        for (double x : {-2.0, -1.0, -0.7, 0.0, 0.125, 0.3, 0.5, 1.0, 1.25, 2.0, 3.0})
            CHECK(dirichlet(l, x) == doctest::Approx(geometric_dirichlet(l, x)).epsilon(1e-12));
    CHECK(dirichlet(8, 0.25) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(dirichlet(0, 0.1), ParameterError);
}

TEST_CASE("collinearity") {
    RTensor3 a(2, 2, 2);
    for (std::size_t i = 0; i < 8; ++i) a.flat()[i] = double(i + 1);
    RTensor3 b = a;
    for (double& v : b.flat()) v *= 2.0;
    CHECK(collinearity(a, a) == doctest::Approx(1.0));
    CHECK(collinearity(a, b) == doctest::Approx(1.0));
    CHECK(collinearity(tensor_with(0, 1.0), tensor_with(5, 3.0)) == 0.0);
    CHECK_THROWS_AS(collinearity(a, RTensor3(2, 2, 2)), DegenerateInputError);
    CHECK_THROWS_AS(collinearity(a, RTensor3(2, 2, 3)), ShapeError);
}

TEST_CASE("Theorem-1 indices") {
    SUBCASE("column bin at sixty degrees") {
        const auto geom = ArrayGeometry::half_wavelength(2, 16, 5.8e9);
        const auto cfg = ofdm(16, 4, 4, 2);
        MultipathSet mp;
        mp.paths.push_back({1.0, kPi / 3.0, kPi / 2.0, 0.0, 0.0});
        const auto b = theorem1_indices(mp, geom, cfg).paths[0];
        CHECK(b.col == doctest::Approx(12.0).epsilon(1e-12));
        CHECK(b.col_bin == 12);
        CHECK(b.on_grid_angle);
        // Oracle: peak of the dense angle transform.
        const auto s = steering_vectors(mp.paths[0], geom, cfg);
        CHECK(argmax_abs(angle_transform(16).adjoint() * s.f_col) == 12);

        const auto big = ArrayGeometry::half_wavelength(2, 1024, 5.8e9);
        const auto sb = steering_vectors(mp.paths[0], big, cfg);
        CHECK(argmax_abs(angle_transform(1024).adjoint() * sb.f_col) == 768);
        CHECK(theorem1_indices(mp, big, cfg).paths[0].col_bin == 768);
    }
    SUBCASE("delay bin") {
        const auto cfg = ofdm(16, 4, 4, 2);
        MultipathSet mp;
        mp.paths.push_back({1.0, kPi / 2, kPi / 2, 3.0 * cfg.sample_interval(), 0.0});
        const auto b = theorem1_indices(mp, test::desk_geometry(), cfg).paths[0];
        CHECK(b.delay_bin == 3);
        CHECK(b.on_grid_delay);
    }
    SUBCASE("Doppler bin") {
        const auto cfg = ofdm(16, 4, 8, 2, 0);
        const double nu = -1.0 / (double(cfg.symbols_per_frame()) * cfg.symbol_duration());
        MultipathSet mp;
        mp.paths.push_back({1.0, kPi / 2, kPi / 2, 0.0, nu});
        const auto geom = test::desk_geometry();
        const auto b = theorem1_indices(mp, geom, cfg).paths[0];
        CHECK(b.doppler_bin == 3);
        CHECK(b.on_grid_doppler);
        const auto s = steering_vectors(mp.paths[0], geom, cfg);
        const auto w = doppler_transform(cfg.symbols_per_frame(), cfg.slots_per_frame, cfg.symbols_per_slot, 0);
        CHECK(argmax_abs(w.adjoint() * s.f_time) == 3);
    }
    SUBCASE("path_at_bins inverts the indices") {
        const auto geom = ArrayGeometry::half_wavelength(4, 8, 5.8e9);
        const auto cfg = ofdm(32, 6, 8, 3, 4);
        MultipathSet mp;
        mp.paths.push_back(path_at_bins(5.3, 2.25, 4.5, 6.75, 1.0, geom, cfg));
        const auto b = theorem1_indices(mp, geom, cfg).paths[0];
        CHECK(b.col == doctest::Approx(5.3).epsilon(1e-12));
        CHECK(b.row == doctest::Approx(2.25).epsilon(1e-12));
        CHECK(b.delay == doctest::Approx(4.5).epsilon(1e-12));
        CHECK(b.doppler == doctest::Approx(6.75).epsilon(1e-12));
        CHECK_THROWS_AS(path_at_bins(0.0, 0.0, 1.0, 1.0, 1.0, geom, cfg), RangeError);
        CHECK_THROWS_AS(path_at_bins(3.0, 2.0, 6.0, 1.0, 1.0, geom, cfg), RangeError);
    }
}

TEST_CASE("Theorem-1 concentration") {
    const auto geom = ArrayGeometry::half_wavelength(4, 4, 5.8e9);
    const auto cfg = ofdm(32, 8, 8, 2);
    SUBCASE("on-grid paths are fully concentrated") {
        MultipathSet mp;
        mp.paths.push_back(path_at_bins(2, 1, 3, 4, 0.7, geom, cfg));
        mp.paths.push_back(path_at_bins(1, 2, 5, 2, 0.3, geom, cfg));
        const auto rep = theorem1_check(tbf_exact(mp, geom, cfg), theorem1_indices(mp, geom, cfg));
        for (double v : rep.per_path) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rep.total == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("an off-grid path leaks and the leak shrinks with resolution") {
        OffGridPath p;
        p.offset = {0.3, -0.2, 0.35, 0.25};
        for (auto axis : {SweepAxis::AngleCol, SweepAxis::AngleRow, SweepAxis::Delay, SweepAxis::Doppler}) {
            const auto s = concentration_sweep(p, axis, 2, geom, cfg, 0.25);
            REQUIRE(s.size() == 3);
            for (double v : s) {
                CHECK(v > 0.0);
                CHECK(v < 1.0);
            }
            CHECK(s[1] > s[0]);
            CHECK(s[2] > s[1]);
        }
    }
    SUBCASE("zero fingerprint") {
        MultipathSet mp;
        mp.paths.push_back(path_at_bins(2, 1, 3, 4, 1.0, geom, cfg));
        Tbf zero{RTensor3(16, 8, 8), {}};
        CHECK_THROWS_AS(theorem1_check(zero, theorem1_indices(mp, geom, cfg)), DegenerateInputError);
    }
}

TEST_CASE("Theorem-2 collinearity") {
    const auto geom = ArrayGeometry::half_wavelength(2, 2, 5.8e9);
    const auto cfg = ofdm(8, 4, 4, 2);
    MultipathSet a;
    a.paths.push_back(path_at_bins(0.4, 1.3, 1.5, 2.2, 0.6, geom, cfg));
    a.paths.push_back(path_at_bins(1.0, 0.0, 0.2, 0.4, 0.4, geom, cfg));
    SUBCASE("identical sets") {
        const auto r = theorem2_check(a, a, geom, cfg, SftfRoute::Both);
        CHECK(r.xi_tbf == doctest::Approx(1.0));
        CHECK(r.xi_sftf == doctest::Approx(1.0));
        CHECK(r.abs_gap < 1e-12);
        REQUIRE(r.xi_sftf_materialized.has_value());
        CHECK(*r.xi_sftf_materialized == doctest::Approx(1.0));
    }
    SUBCASE("disjoint on-grid sets") {
        MultipathSet x, y;
        x.paths.push_back(path_at_bins(1, 0, 1, 1, 1.0, geom, cfg));
        y.paths.push_back(path_at_bins(1, 1, 2, 3, 1.0, geom, cfg));
        const auto r = theorem2_check(x, y, geom, cfg, SftfRoute::Both);
        CHECK(r.xi_tbf < 1e-20);
        CHECK(r.xi_sftf < 1e-20);
        CHECK(r.abs_gap < 1e-20);
    }
    SUBCASE("analytic and materialized routes agree") {
        MultipathSet b;
        b.paths.push_back(path_at_bins(0.8, 1.1, 1.0, 2.0, 1.0, geom, cfg));
        const auto r = theorem2_check(a, b, geom, cfg, SftfRoute::Both);
        REQUIRE(r.xi_sftf_materialized.has_value());
        CHECK(std::fabs(*r.xi_sftf_materialized - r.xi_sftf) < 1e-12);
        CHECK(r.xi_tbf > 0.0);
    }
}

TEST_CASE("Lemma-5 unitary invariance") {
    CHECK(lemma5_check(1, {4, 4, 4}, MatrixKind::Identity) < 1e-12);
    for (std::uint64_t s = 0; s < 5; ++s) CHECK(lemma5_check(s, {4, 4, 4}, MatrixKind::Dft) <= 1e-10);
    CHECK(lemma5_check(2, {3, 5, 2}, MatrixKind::Dft) <= 1e-10);
    CHECK(lemma5_check(3, {4, 4, 4}, MatrixKind::NonUnitary) > 1e-3);
}

TEST_CASE("Lemma-4 extensions") {
    const auto geom = ArrayGeometry::half_wavelength(2, 2, 5.8e9);
    SUBCASE("on-grid set") {
        const auto cfg = ofdm(16, 4, 4, 2);
        MultipathSet mp;
        mp.paths.push_back(path_at_bins(1, 0, 3, 1, 0.5, geom, cfg));
        mp.paths.push_back(path_at_bins(0.5, 1.5, 1, 2, 0.5, geom, cfg));
        const auto r = lemma4_check(mp, geom, cfg);
        CHECK(r.delay_deviation <= 1e-9);
        CHECK(r.doppler_deviation <= 1e-9);
    }
    SUBCASE("zero channel") {
        const auto cfg = ofdm(16, 4, 4, 2);
        MultipathSet mp;
        mp.paths.push_back(path_at_bins(1, 0, 3, 1, 0.0, geom, cfg));
        const auto r = lemma4_check(mp, geom, cfg);
        CHECK(r.delay_deviation == 0.0);
        CHECK(r.doppler_deviation == 0.0);
    }
    SUBCASE("off-grid delay leak shrinks with the subcarrier count") {
        std::vector<double> dev;
        for (std::size_t nc : {256u, 512u, 1024u}) {
            const auto cfg = ofdm(nc, nc / 8, 4, 2);
            MultipathSet mp;
            mp.paths.push_back(path_at_bins(1.3, 0.8, double(nc / 16) + 0.37, 2.25, 1.0, geom, cfg));
            dev.push_back(lemma4_check(mp, geom, cfg).delay_deviation);
        }
        CHECK(dev[0] > dev[1]);
        CHECK(dev[1] > dev[2]);
    }
}

TEST_CASE("extended trace identity") {
    const auto geom = ArrayGeometry::half_wavelength(2, 2, 5.8e9);
    const auto cfg = ofdm(8, 4, 4, 1);
    MultipathSet a, b;
    a.paths.push_back(path_at_bins(0.4, 1.3, 1.5, 2.2, 0.6, geom, cfg));
    a.paths.push_back(path_at_bins(1.2, 0.6, 0.2, 0.4, 0.4, geom, cfg));
    b.paths.push_back(path_at_bins(0.7, 1.1, 2.5, 1.6, 1.0, geom, cfg));
    CHECK(trace_identity_deviation(a, b, geom, cfg) < 1e-10);
}

}  // TEST_SUITE
