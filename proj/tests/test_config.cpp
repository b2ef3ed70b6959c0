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

#include <fstream>
#include <string>

#include "helpers.hpp"
#include "tbf/config.hpp"

using namespace tbf;
using nlohmann::json;

namespace {

std::string schema_message(const json& j) {
    try {
        config_from_json(j);
    } catch (const SchemaError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty document gives the defaults") {
    const EngineConfig c = config_from_json(json::object());
    CHECK(c.geometry.m_rows == 4);
    CHECK(c.geometry.wavelength == doctest::Approx(kSpeedOfLight / 5.8e9));
    CHECK(c.ofdm.n_subcarriers == 256);
    CHECK(c.ofdm.cp_length == 18);
    CHECK(c.dataset.n_draws == 100);
    CHECK(c.dataset.snr_db == 20.0);
    CHECK(c.wknn.k == 5);
}

TEST_CASE("round trip through JSON") {
    json j = json::parse(R"({
        "seed": 9,
        "geometry": {"m_rows": 8, "m_cols": 2, "carrier_hz": 3.5e9},
        "ofdm": {"n_subcarriers": 64, "cp_length": 8, "slots_per_frame": 4, "symbols_per_slot": 3},
        "scene": {"extent": 5, "shell_half_width": 10, "n_scatterers": 4},
        "dataset": {"snr_db": null, "heading_policy": "all16", "floors": [1.5, 4.5]},
        "wknn": {"k": 3, "weighting": "uniform", "snr_sweep_db": [0, 10]}
    })");
    const EngineConfig c = config_from_json(j);
    CHECK(c.scene.seed == 9);
    CHECK(c.geometry.d_row == doctest::Approx(kSpeedOfLight / 3.5e9 / 2.0));
    CHECK_FALSE(c.dataset.snr_db.has_value());
    CHECK(c.dataset.heading_policy == HeadingPolicy::All16);
    CHECK(c.wknn.weighting == Weighting::Uniform);
    const json out = config_to_json(c);
    CHECK(config_to_json(config_from_json(out)) == out);
}

TEST_CASE("schema errors name the field") {
    CHECK(schema_message(json{{"ofdm", {{"n_subcarrier", 64}}}}).find("ofdm.n_subcarrier") != std::string::npos);
    CHECK(schema_message(json{{"dataset", {{"gamma", 2.0}}}}).find("dataset.gamma") != std::string::npos);
    CHECK(schema_message(json{{"wknn", {{"k", -1}}}}).find("wknn.k") != std::string::npos);
    CHECK(schema_message(json{{"scene", {{"bs_position", {0, 0}}}}}).find("scene.bs_position") != std::string::npos);
    CHECK(schema_message(json{{"geometry", {{"wavelength", 0.05}, {"carrier_hz", 6e9}}}})
              .find("geometry.carrier_hz") != std::string::npos);
    CHECK(schema_message(json{{"ofdm", {{"cp_length", 0}}}}).find("ofdm") != std::string::npos);
    CHECK(schema_message(json{{"dataset", {{"heading_policy", "north"}}}}).find("dataset.heading_policy") !=
          std::string::npos);
    CHECK(schema_message(json{{"bogus", 1}}).find("bogus") != std::string::npos);
}

TEST_CASE("config files") {
    const auto dir = test::scratch("config_files");
    {
        std::ofstream(dir / "ok.json") << R"({"seed": 4})";
        std::ofstream(dir / "bad.json") << "{ not json";
    }
    CHECK(load_config(dir / "ok.json").seed == 4);
    CHECK_THROWS_AS(load_config(dir / "bad.json"), SchemaError);
    CHECK_THROWS_AS(load_config(dir / "none.json"), SchemaError);
}

}  // TEST_SUITE
