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

#include "tbf/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tbf/errors.hpp"

namespace tbf {

FingerprintDatabase::FingerprintDatabase(const std::vector<FingerprintRecord>& records) {
    for (const auto& r : records) add({r.ut.position, r.direction_class, flatten_row_major(r.inputs.x_ad)});
}

void FingerprintDatabase::add(DatabaseEntry entry) {
    if (!entries_.empty() && entries_.front().features.size() != entry.features.size())
        throw ShapeError("database entries must share one feature length");
    entries_.push_back(std::move(entry));
}

Eigen::VectorXd flatten_row_major(const Eigen::MatrixXd& m) {
    Eigen::VectorXd v(m.size());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v[k++] = m(i, j);
    return v;
}

Weighting parse_weighting(const std::string& name) {
    if (name == "inverse_distance") return Weighting::InverseDistance;
    if (name == "uniform") return Weighting::Uniform;
    throw ParameterError("unknown weighting '" + name + "' (expected inverse_distance or uniform)");
}

Vec3 wknn_locate(const FingerprintDatabase& db, const Eigen::VectorXd& query, std::size_t k, Weighting weighting) {
    if (db.empty()) throw ParameterError("WKNN database is empty");
    if (k < 1 || k > db.size()) throw ParameterError("k must lie in [1, database size]");
    const auto& e = db.entries();
    if (e.front().features.size() != query.size()) throw ShapeError("query length does not match the database");

    std::vector<double> dist(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) dist[i] = (e[i].features - query).norm();
    std::vector<std::size_t> order(e.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + std::ptrdiff_t(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });

    Vec3 acc = Vec3::Zero();
    double wsum = 0.0;
    if (weighting == Weighting::InverseDistance && dist[order[0]] == 0.0) {
        // Exact matches take all the weight (the floor -> 0 limit).
        for (std::size_t n = 0; n < k && dist[order[n]] == 0.0; ++n) {
            acc += e[order[n]].position;
            wsum += 1.0;
        }
        return acc / wsum;
    }
    for (std::size_t n = 0; n < k; ++n) {
        const std::size_t i = order[n];
        const double w = weighting == Weighting::Uniform ? 1.0 : 1.0 / (dist[i] + kWeightFloor);
        acc += w * e[i].position;
        wsum += w;
    }
    return acc / wsum;
}

Vec3 wknn_locate(const FingerprintDatabase& db, const Eigen::MatrixXd& query_x_ad, std::size_t k,
                 Weighting weighting) {
    return wknn_locate(db, flatten_row_major(query_x_ad), k, weighting);
}

std::string DistanceBucket::label() const {
    std::ostringstream os;
    if (std::isinf(hi)) {
        os << lo << "+";
    } else {
        os << lo << "-" << hi;
    }
    return os.str();
}

std::vector<DistanceBucket> default_buckets() {
    const double inf = std::numeric_limits<double>::infinity();
    return {{0.0, 5.0, 0, 0.0}, {5.0, 10.0, 0, 0.0}, {10.0, 15.0, 0, 0.0}, {15.0, 20.0, 0, 0.0}, {20.0, inf, 0, 0.0}};
}

EvalReport eval_localization(std::span<const Vec3> estimates, std::span<const Vec3> truths, const Vec3& bs_position) {
    if (estimates.size() != truths.size())
        throw ShapeError("estimate count " + std::to_string(estimates.size()) + " does not match truth count " +
                         std::to_string(truths.size()));
    if (estimates.empty()) throw ParameterError("no samples to evaluate");
    EvalReport rep;
    rep.range_buckets = default_buckets();
    std::vector<double> bucket_sum(rep.range_buckets.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const double err = (estimates[i] - truths[i]).norm();
        rep.errors.push_back(err);
        total += err;
        const double range = (truths[i] - bs_position).head<2>().norm();
        for (std::size_t b = 0; b < rep.range_buckets.size(); ++b) {
            if (range >= rep.range_buckets[b].lo && range < rep.range_buckets[b].hi) {
                rep.range_buckets[b].count += 1;
                bucket_sum[b] += err;
                break;
            }
        }
    }
    rep.mean_error = total / double(estimates.size());
    for (std::size_t b = 0; b < rep.range_buckets.size(); ++b) {
        auto& bk = rep.range_buckets[b];
        bk.mean_error = bk.count ? bucket_sum[b] / double(bk.count) : std::numeric_limits<double>::quiet_NaN();
    }
    std::vector<double> sorted = rep.errors;
    std::sort(sorted.begin(), sorted.end());
    const double n = double(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        rep.cdf_points.emplace_back(sorted[i], double(i + 1) / n);
    }
    return rep;
}

OrientationReport eval_orientation(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
    if (predicted.size() != truth.size()) throw ShapeError("prediction and truth counts differ");
    OrientationReport rep;
    std::size_t adjacent = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::size_t t = truth[i], p = predicted[i];
        if (t >= kDirectionClasses || p >= kDirectionClasses) throw ParameterError("direction class out of range");
        rep.confusion[t][p] += 1;
        if (t == p) {
            rep.correct += 1;
        } else {
            const std::size_t d = (p + kDirectionClasses - t) % kDirectionClasses;
            if (d == 1 || d == kDirectionClasses - 1) ++adjacent;
        }
    }
    rep.total = truth.size();
    for (std::size_t t = 0; t < kDirectionClasses; ++t) {
        std::size_t row = 0;
        for (std::size_t p = 0; p < kDirectionClasses; ++p) row += rep.confusion[t][p];
        for (std::size_t p = 0; p < kDirectionClasses; ++p)
            rep.recall[t][p] = row ? double(rep.confusion[t][p]) / double(row) : 0.0;
    }
    rep.accuracy = rep.total ? double(rep.correct) / double(rep.total) : 0.0;
    const std::size_t errors = rep.total - rep.correct;
    rep.adjacency_share = errors ? double(adjacent) / double(errors) : 0.0;
    return rep;
}

}  // namespace tbf
