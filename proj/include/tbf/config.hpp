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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tbf/baseline.hpp"
#include "tbf/channel_model.hpp"
#include "tbf/dataset.hpp"
#include "tbf/scene.hpp"

namespace tbf {

inline constexpr double kDefaultCarrierHz = 5.8e9;

struct DatasetSection {
    double grid_spacing = 1.0;
    std::vector<double> floors{1.5};
    HeadingPolicy heading_policy = HeadingPolicy::Random;
    std::size_t n_draws = 100;
    std::optional<double> snr_db = 20.0;  // null = noiseless
    double gamma = kDefaultGamma;
    double speed = 5.0 / 3.6;
    bool snap_to_grid = false;
    std::size_t threads = 0;
};

struct WknnSection {
    std::size_t k = kDefaultK;
    Weighting weighting = Weighting::InverseDistance;
    std::size_t n_queries = 200;
    std::vector<double> snr_sweep_db{0.0, 5.0, 10.0, 15.0, 20.0};
};

struct EngineConfig {
    std::uint64_t seed = 0;
    ArrayGeometry geometry = ArrayGeometry::half_wavelength(4, 4, kDefaultCarrierHz);
    OfdmConfig ofdm;
    SceneConfig scene;
    DatasetSection dataset;
    WknnSection wknn;

    void validate() const;  // delegates to each section; SchemaError on failure
};

// Sections and fields absent from the document keep their defaults. Unknown keys are rejected
// with the offending path (for example "ofdm.n_subcarrier").
EngineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const EngineConfig& c);
EngineConfig load_config(const std::filesystem::path& path);

// Geometry: {m_rows, m_cols, wavelength | carrier_hz, d_row?, d_col?}; spacings default to half a wavelength.
// With `unknown` set, unrecognized keys are copied there instead of raising SchemaError.
ArrayGeometry geometry_from_json(const nlohmann::json& j, const std::string& path,
                                 nlohmann::json* unknown = nullptr);
nlohmann::json geometry_to_json(const ArrayGeometry& g);
OfdmConfig ofdm_from_json(const nlohmann::json& j, const std::string& path, nlohmann::json* unknown = nullptr);
nlohmann::json ofdm_to_json(const OfdmConfig& c);

}  // namespace tbf
