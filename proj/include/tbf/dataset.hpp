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
#include <optional>
#include <string>
#include <vector>

#include "tbf/fingerprint.hpp"
#include "tbf/preprocess.hpp"
#include "tbf/scene.hpp"

namespace tbf {

struct FingerprintRecord {
    std::uint64_t id = 0;
    UtState ut;
    std::size_t direction_class = 0;
    std::optional<double> snr_db;
    Tbf tbf;
    PreprocessedInputs inputs;
};

struct GridSpec {
    double spacing = 1.0;
    std::vector<double> floors{1.5};  // UT heights [m]
};

// Grid points spanning [-extent, extent]^2 on every floor, x fastest, then y, then floor.
std::vector<Vec3> grid_points(const GridSpec& grid, double extent);

enum class HeadingPolicy {
    Random,  // one uniformly random heading per point (regression sets)
    All16,   // the 16 class-centre headings per point (classification sets)
};

HeadingPolicy parse_heading_policy(const std::string& name);
std::string to_string(HeadingPolicy p);

struct DatasetOptions {
    std::uint64_t seed = 0;
    std::size_t n_draws = 100;  // Monte-Carlo snapshots per noisy fingerprint
    double gamma = kDefaultGamma;
    double speed = 5.0 / 3.6;
    bool snap_to_grid = false;
    std::size_t threads = 0;  // 0 = hardware concurrency
};

// Fingerprint for one UT state. Noiseless records use the closed-form expectation; noisy records
// average `n_draws` snapshots. `record_seed` feeds every random draw of the record.
FingerprintRecord make_record(const Scene& scene, const UtState& ut, std::uint64_t id,
                              std::optional<double> snr_db, const ArrayGeometry& geom, const OfdmConfig& cfg,
                              const TransformSet& t, const DatasetOptions& opt, std::uint64_t record_seed);

// UT states of a grid dataset: Random draws heading i from derive_seed(seed, heading, i); All16 emits the
// 16 class-centre headings per point.
std::vector<UtState> grid_states(const GridSpec& grid, double extent, HeadingPolicy policy, double speed,
                                 std::uint64_t seed);

std::vector<FingerprintRecord> build_dataset(const Scene& scene, const GridSpec& grid, HeadingPolicy policy,
                                             std::optional<double> snr_db, const ArrayGeometry& geom,
                                             const OfdmConfig& cfg, const DatasetOptions& opt);

// Records at explicit UT states (test sets, paired records); record i uses derive_seed(seed, record, i).
std::vector<FingerprintRecord> build_records(const Scene& scene, const std::vector<UtState>& states,
                                             std::optional<double> snr_db, const ArrayGeometry& geom,
                                             const OfdmConfig& cfg, const DatasetOptions& opt,
                                             std::uint64_t first_id = 0);

// Uniformly random UT states inside the sampling area on the given floors.
std::vector<UtState> random_states(std::size_t count, double extent, const std::vector<double>& floors,
                                   double speed, std::uint64_t seed);

}  // namespace tbf
