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

#include "tbf/dataset.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "tbf/errors.hpp"
#include "tbf/random.hpp"

namespace tbf {

std::vector<Vec3> grid_points(const GridSpec& grid, double extent) {
    if (!(grid.spacing > 0.0)) throw ParameterError("grid spacing must be positive");
    if (!(extent >= 0.0)) throw ParameterError("extent must be nonnegative");
    if (grid.floors.empty()) throw ParameterError("grid is empty: no floors");
    const auto per_axis = std::size_t(std::floor(2.0 * extent / grid.spacing + 1e-9)) + 1;
    std::vector<Vec3> pts;
    pts.reserve(per_axis * per_axis * grid.floors.size());
    for (double z : grid.floors)
        for (std::size_t iy = 0; iy < per_axis; ++iy)
            for (std::size_t ix = 0; ix < per_axis; ++ix)
                pts.emplace_back(-extent + double(ix) * grid.spacing, -extent + double(iy) * grid.spacing, z);
    return pts;
}

HeadingPolicy parse_heading_policy(const std::string& name) {
    if (name == "random") return HeadingPolicy::Random;
    if (name == "all16") return HeadingPolicy::All16;
    throw ParameterError("unknown heading policy '" + name + "' (expected random or all16)");
}

std::string to_string(HeadingPolicy p) { return p == HeadingPolicy::Random ? "random" : "all16"; }

FingerprintRecord make_record(const Scene& scene, const UtState& ut, std::uint64_t id, std::optional<double> snr_db,
                              const ArrayGeometry& geom, const OfdmConfig& cfg, const TransformSet& t,
                              const DatasetOptions& opt, std::uint64_t record_seed) {
    MultipathSet mp = multipath_for(scene, ut, geom, cfg).set;
    if (opt.snap_to_grid) mp = snap_to_grid(mp, geom, cfg);
    mp.id = id;

    FingerprintRecord r;
    r.id = id;
    r.ut = ut;
    r.direction_class = direction_class(ut.heading);
    r.snr_db = snr_db;
    if (noise_ratio(snr_db) > 0.0) {
        MonteCarloOptions mc;
        mc.n_draws = opt.n_draws;
        mc.seed = record_seed;
        mc.snr_db = snr_db;
        r.tbf = tbf_monte_carlo(mp, geom, cfg, t, mc);
    } else {
        r.tbf = tbf_exact(mp, geom, cfg, t);
        r.tbf.meta.snr_db = snr_db;
    }
    r.inputs = preprocess(r.tbf, opt.gamma);
    return r;
}

std::vector<FingerprintRecord> build_records(const Scene& scene, const std::vector<UtState>& states,
                                             std::optional<double> snr_db, const ArrayGeometry& geom,
                                             const OfdmConfig& cfg, const DatasetOptions& opt,
                                             std::uint64_t first_id) {
    const TransformSet t = reduced_transform_matrices(geom, cfg);
    std::vector<FingerprintRecord> out(states.size());
    std::size_t workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(1, states.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= states.size()) return;
            try {
                const std::uint64_t id = first_id + i;
                out[i] = make_record(scene, states[i], id, snr_db, geom, cfg, t, opt,
                                     derive_seed(opt.seed, streams::record, id));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(states.size());
                return;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<UtState> grid_states(const GridSpec& grid, double extent, HeadingPolicy policy, double speed,
                                 std::uint64_t seed) {
    const std::vector<Vec3> points = grid_points(grid, extent);
    std::vector<UtState> states;
    std::uniform_real_distribution<double> heading(0.0, 2.0 * kPi);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (policy == HeadingPolicy::Random) {
            Rng rng(derive_seed(seed, streams::heading, i));
            states.push_back({points[i], speed, heading(rng)});
        } else {
            for (std::size_t c = 0; c < kDirectionClasses; ++c) states.push_back({points[i], speed, class_heading(c)});
        }
    }
    return states;
}

std::vector<FingerprintRecord> build_dataset(const Scene& scene, const GridSpec& grid, HeadingPolicy policy,
                                             std::optional<double> snr_db, const ArrayGeometry& geom,
                                             const OfdmConfig& cfg, const DatasetOptions& opt) {
    return build_records(scene, grid_states(grid, scene.extent, policy, opt.speed, opt.seed), snr_db, geom, cfg, opt);
}

std::vector<UtState> random_states(std::size_t count, double extent, const std::vector<double>& floors, double speed,
                                   std::uint64_t seed) {
    if (floors.empty()) throw ParameterError("no floors to sample from");
    std::vector<UtState> out;
    std::uniform_real_distribution<double> xy(-extent, extent);
    std::uniform_real_distribution<double> heading(0.0, 2.0 * kPi);
    std::uniform_int_distribution<std::size_t> floor_pick(0, floors.size() - 1);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, streams::query, i));
        const double x = xy(rng);
        const double y = xy(rng);
        const double z = floors[floor_pick(rng)];
        out.push_back({Vec3(x, y, z), speed, heading(rng)});
    }
    return out;
}

}  // namespace tbf
