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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tbf/dataset.hpp"

namespace tbf {

struct DatabaseEntry {
    Vec3 position;
    std::size_t direction_class = 0;
    Eigen::VectorXd features;  // flattened x_ad, row-major
};

class FingerprintDatabase {
public:
    FingerprintDatabase() = default;
    explicit FingerprintDatabase(const std::vector<FingerprintRecord>& records);

    void add(DatabaseEntry entry);
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<DatabaseEntry>& entries() const { return entries_; }

private:
    std::vector<DatabaseEntry> entries_;
};

// Row-major flattening used for WKNN features.
Eigen::VectorXd flatten_row_major(const Eigen::MatrixXd& m);

enum class Weighting { InverseDistance, Uniform };

Weighting parse_weighting(const std::string& name);

inline constexpr std::size_t kDefaultK = 5;
inline constexpr double kWeightFloor = 1e-12;

Vec3 wknn_locate(const FingerprintDatabase& db, const Eigen::VectorXd& query, std::size_t k,
                 Weighting weighting = Weighting::InverseDistance);
Vec3 wknn_locate(const FingerprintDatabase& db, const Eigen::MatrixXd& query_x_ad, std::size_t k,
                 Weighting weighting = Weighting::InverseDistance);

struct DistanceBucket {
    double lo = 0.0;
    double hi = 0.0;  // +inf for the overflow bucket
    std::size_t count = 0;
    double mean_error = 0.0;  // NaN when empty

    std::string label() const;
};

// Left-closed right-open horizontal distance buckets: 0-5, 5-10, 10-15, 15-20 and 20+ m.
std::vector<DistanceBucket> default_buckets();

struct EvalReport {
    std::vector<double> errors;
    double mean_error = 0.0;
    std::vector<std::pair<double, double>> cdf_points;  // (error, cumulative fraction)
    std::vector<DistanceBucket> range_buckets;
};

EvalReport eval_localization(std::span<const Vec3> estimates, std::span<const Vec3> truths,
                             const Vec3& bs_position);

struct OrientationReport {
    std::array<std::array<std::size_t, kDirectionClasses>, kDirectionClasses> confusion{};  // [true][pred]
    std::array<std::array<double, kDirectionClasses>, kDirectionClasses> recall{};          // row-normalized
    double accuracy = 0.0;
    double adjacency_share = 0.0;  // share of errors that land one class away (mod 16)
    std::size_t total = 0;
    std::size_t correct = 0;
};

OrientationReport eval_orientation(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

}  // namespace tbf
