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

#include "tbf/config.hpp"

#include <fstream>

#include "json_util.hpp"

namespace tbf {

using detail::as_bool;
using detail::as_count;
using detail::as_number;
using detail::as_string;
using detail::as_u64;
using detail::check_keys;
using detail::json;
using detail::read_optional;
using detail::require_object;
using detail::schema_fail;

namespace {

template <class F>
void validate_section(const std::string& path, F&& check) {
    try {
        check();
    } catch (const ParameterError& e) {
        schema_fail(path, e.what());
    }
}

Vec3 as_vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) schema_fail(path, "expected an array of 3 numbers");
    return {as_number(j[0], detail::index_path(path, 0)), as_number(j[1], detail::index_path(path, 1)),
            as_number(j[2], detail::index_path(path, 2))};
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
    if (!j.is_array()) schema_fail(path, "expected an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_number(j[i], detail::index_path(path, i)));
    return v;
}

std::optional<double> as_optional_snr(const json& j, const std::string& path) {
    if (j.is_null()) return std::nullopt;
    return as_number(j, path);
}

json snr_to_json(const std::optional<double>& snr) { return snr ? json(*snr) : json(nullptr); }

SceneConfig scene_from_json(const json& j, const std::string& path, std::uint64_t default_seed) {
    require_object(j, path);
    check_keys(j,
               {"bs_position", "n_scatterers", "extent", "shell_half_width", "scatterer_z_min", "scatterer_z_max",
                "path_loss_exponent", "include_los", "seed"},
               path, nullptr);
    SceneConfig s;
    s.seed = default_seed;
    read_optional(j, "bs_position", path, s.bs_position, as_vec3);
    read_optional(j, "n_scatterers", path, s.n_scatterers, as_count);
    read_optional(j, "extent", path, s.extent, as_number);
    read_optional(j, "shell_half_width", path, s.shell_half_width, as_number);
    read_optional(j, "scatterer_z_min", path, s.scatterer_z_min, as_number);
    read_optional(j, "scatterer_z_max", path, s.scatterer_z_max, as_number);
    read_optional(j, "path_loss_exponent", path, s.path_loss_exponent, as_number);
    read_optional(j, "include_los", path, s.include_los, as_bool);
    read_optional(j, "seed", path, s.seed, as_u64);
    return s;
}

DatasetSection dataset_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j,
               {"grid_spacing", "floors", "heading_policy", "n_draws", "snr_db", "gamma", "speed_mps", "snap_to_grid",
                "threads"},
               path, nullptr);
    DatasetSection d;
    read_optional(j, "grid_spacing", path, d.grid_spacing, as_number);
    read_optional(j, "floors", path, d.floors, as_number_list);
    read_optional(j, "heading_policy", path, d.heading_policy, [](const json& v, const std::string& p) {
        const std::string name = as_string(v, p);
        try {
            return parse_heading_policy(name);
        } catch (const ParameterError& e) {
            schema_fail(p, e.what());
        }
    });
    read_optional(j, "n_draws", path, d.n_draws, as_count);
    read_optional(j, "snr_db", path, d.snr_db, as_optional_snr);
    read_optional(j, "gamma", path, d.gamma, as_number);
    read_optional(j, "speed_mps", path, d.speed, as_number);
    read_optional(j, "snap_to_grid", path, d.snap_to_grid, as_bool);
    read_optional(j, "threads", path, d.threads, as_count);
    return d;
}

WknnSection wknn_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, {"k", "weighting", "n_queries", "snr_sweep_db"}, path, nullptr);
    WknnSection w;
    read_optional(j, "k", path, w.k, as_count);
    read_optional(j, "weighting", path, w.weighting, [](const json& v, const std::string& p) {
        const std::string name = as_string(v, p);
        try {
            return parse_weighting(name);
        } catch (const ParameterError& e) {
            schema_fail(p, e.what());
        }
    });
    read_optional(j, "n_queries", path, w.n_queries, as_count);
    read_optional(j, "snr_sweep_db", path, w.snr_sweep_db, as_number_list);
    return w;
}

}  // namespace

ArrayGeometry geometry_from_json(const json& j, const std::string& path, json* unknown) {
    require_object(j, path);
    check_keys(j, {"m_rows", "m_cols", "wavelength", "carrier_hz", "d_row", "d_col"}, path, unknown);
    if (j.contains("wavelength") && j.contains("carrier_hz"))
        schema_fail(detail::join_path(path, "carrier_hz"), "give either wavelength or carrier_hz, not both");
    ArrayGeometry g = ArrayGeometry::half_wavelength(4, 4, kDefaultCarrierHz);
    read_optional(j, "m_rows", path, g.m_rows, as_count);
    read_optional(j, "m_cols", path, g.m_cols, as_count);
    read_optional(j, "wavelength", path, g.wavelength, as_number);
    if (j.contains("carrier_hz")) {
        const double f = as_number(j["carrier_hz"], detail::join_path(path, "carrier_hz"));
        if (!(f > 0.0)) schema_fail(detail::join_path(path, "carrier_hz"), "must be positive");
        g.wavelength = kSpeedOfLight / f;
    }
    g.d_row = g.wavelength / 2.0;
    g.d_col = g.wavelength / 2.0;
    read_optional(j, "d_row", path, g.d_row, as_number);
    read_optional(j, "d_col", path, g.d_col, as_number);
    validate_section(path, [&] { g.validate(); });
    return g;
}

json geometry_to_json(const ArrayGeometry& g) {
    return json{{"m_rows", g.m_rows}, {"m_cols", g.m_cols}, {"wavelength", g.wavelength},
                {"d_row", g.d_row},   {"d_col", g.d_col}};
}

OfdmConfig ofdm_from_json(const json& j, const std::string& path, json* unknown) {
    require_object(j, path);
    check_keys(j,
               {"n_subcarriers", "cp_length", "subcarrier_spacing", "slots_per_frame", "symbols_per_slot",
                "first_symbol_index"},
               path, unknown);
    OfdmConfig c;
    read_optional(j, "n_subcarriers", path, c.n_subcarriers, as_count);
    read_optional(j, "cp_length", path, c.cp_length, as_count);
    read_optional(j, "subcarrier_spacing", path, c.subcarrier_spacing, as_number);
    read_optional(j, "slots_per_frame", path, c.slots_per_frame, as_count);
    read_optional(j, "symbols_per_slot", path, c.symbols_per_slot, as_count);
    read_optional(j, "first_symbol_index", path, c.first_symbol_index, as_count);
    validate_section(path, [&] { c.validate(); });
    return c;
}

json ofdm_to_json(const OfdmConfig& c) {
    return json{{"n_subcarriers", c.n_subcarriers},     {"cp_length", c.cp_length},
                {"subcarrier_spacing", c.subcarrier_spacing}, {"slots_per_frame", c.slots_per_frame},
                {"symbols_per_slot", c.symbols_per_slot}, {"first_symbol_index", c.first_symbol_index}};
}

void EngineConfig::validate() const {
    validate_section("geometry", [&] { geometry.validate(); });
    validate_section("ofdm", [&] { ofdm.validate(); });
    validate_section("scene", [&] { scene.validate(); });
    if (!(dataset.grid_spacing > 0.0)) schema_fail("dataset.grid_spacing", "must be positive");
    if (dataset.floors.empty()) schema_fail("dataset.floors", "needs at least one height");
    if (dataset.n_draws < 1) schema_fail("dataset.n_draws", "must be >= 1");
    if (!(dataset.gamma >= 0.0 && dataset.gamma <= 1.0)) schema_fail("dataset.gamma", "must lie in [0, 1]");
    if (!(dataset.speed >= 0.0)) schema_fail("dataset.speed_mps", "must be nonnegative");
    if (wknn.k < 1) schema_fail("wknn.k", "must be >= 1");
    if (wknn.n_queries < 1) schema_fail("wknn.n_queries", "must be >= 1");
}

EngineConfig config_from_json(const json& j) {
    require_object(j, "");
    check_keys(j, {"seed", "geometry", "ofdm", "scene", "dataset", "wknn"}, "", nullptr);
    EngineConfig c;
    read_optional(j, "seed", "", c.seed, as_u64);
    if (j.contains("geometry")) c.geometry = geometry_from_json(j["geometry"], "geometry");
    if (j.contains("ofdm")) c.ofdm = ofdm_from_json(j["ofdm"], "ofdm");
    c.scene.seed = c.seed;
    if (j.contains("scene")) c.scene = scene_from_json(j["scene"], "scene", c.seed);
    if (j.contains("dataset")) c.dataset = dataset_from_json(j["dataset"], "dataset");
    if (j.contains("wknn")) c.wknn = wknn_from_json(j["wknn"], "wknn");
    c.validate();
    return c;
}

json config_to_json(const EngineConfig& c) {
    const auto& s = c.scene;
    const auto& d = c.dataset;
    json floors = json::array();
    for (double z : d.floors) floors.push_back(z);
    json sweep = json::array();
    for (double v : c.wknn.snr_sweep_db) sweep.push_back(v);
    return json{
        {"seed", c.seed},
        {"geometry", geometry_to_json(c.geometry)},
        {"ofdm", ofdm_to_json(c.ofdm)},
        {"scene",
         {{"bs_position", {s.bs_position.x(), s.bs_position.y(), s.bs_position.z()}},
          {"n_scatterers", s.n_scatterers},
          {"extent", s.extent},
          {"shell_half_width", s.shell_half_width},
          {"scatterer_z_min", s.scatterer_z_min},
          {"scatterer_z_max", s.scatterer_z_max},
          {"path_loss_exponent", s.path_loss_exponent},
          {"include_los", s.include_los},
          {"seed", s.seed}}},
        {"dataset",
         {{"grid_spacing", d.grid_spacing},
          {"floors", floors},
          {"heading_policy", to_string(d.heading_policy)},
          {"n_draws", d.n_draws},
          {"snr_db", snr_to_json(d.snr_db)},
          {"gamma", d.gamma},
          {"speed_mps", d.speed},
          {"snap_to_grid", d.snap_to_grid},
          {"threads", d.threads}}},
        {"wknn",
         {{"k", c.wknn.k},
          {"weighting", c.wknn.weighting == Weighting::Uniform ? "uniform" : "inverse_distance"},
          {"n_queries", c.wknn.n_queries},
          {"snr_sweep_db", sweep}}},
    };
}

EngineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path.string() + ": cannot open config file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": invalid JSON: " + e.what());
    }
    return config_from_json(j);
}

}  // namespace tbf
