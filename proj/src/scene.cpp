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

#include "tbf/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tbf/analysis.hpp"
#include "tbf/errors.hpp"
#include "tbf/random.hpp"

namespace tbf {

void SceneConfig::validate() const {
    if (n_scatterers == 0 && !include_los) throw ParameterError("scene needs scatterers or a LOS path");
    if (!(extent > 0.0)) throw ParameterError("extent must be positive");
    if (!(shell_half_width > 0.0) || shell_half_width > 3.0 * extent)
        throw ParameterError("shell_half_width must lie in (0, 3 * extent]");
    if (!(scatterer_z_min <= scatterer_z_max)) throw ParameterError("scatterer_z_min exceeds scatterer_z_max");
    if (!(path_loss_exponent >= 0.0)) throw ParameterError("path_loss_exponent must be nonnegative");
    if (!bs_position.allFinite()) throw ParameterError("bs_position must be finite");
}

Scene build_scene(const SceneConfig& config) {
    config.validate();
    Scene s;
    s.bs_position = config.bs_position;
    s.extent = config.extent;
    s.path_loss_exponent = config.path_loss_exponent;
    s.seed = config.seed;
    s.include_los = config.include_los;
    Rng rng(derive_seed(config.seed, streams::scene));
    std::uniform_real_distribution<double> xy(-config.shell_half_width, config.shell_half_width);
    std::uniform_real_distribution<double> z(config.scatterer_z_min, config.scatterer_z_max);
    for (std::size_t i = 0; i < config.n_scatterers; ++i) {
        const double x = xy(rng);
        const double y = xy(rng);
        s.scatterers.emplace_back(x, y, z(rng));
    }
    return s;
}

namespace {

struct RawPath {
    double length;
    Vec3 arrival;    // unit vector from the BS towards the last interaction point
    Vec3 departure;  // unit vector from the UT towards the first interaction point
};

void arrival_angles(const Vec3& d, double& elevation, double& azimuth) {
    elevation = std::acos(std::clamp(d.z(), -1.0, 1.0));
    azimuth = std::atan2(std::fabs(d.y()), d.x());
}

}  // namespace

MultipathResult multipath_for(const Scene& scene, const UtState& ut, const ArrayGeometry& geom,
                              const OfdmConfig& cfg) {
    geom.validate();
    cfg.validate();
    const double slack = 1e-9 * scene.extent;
    if (std::fabs(ut.position.x()) > scene.extent + slack || std::fabs(ut.position.y()) > scene.extent + slack)
        throw ParameterError("UT position outside the sampling area");
    if (!(ut.speed >= 0.0)) throw ParameterError("UT speed must be nonnegative");

    std::vector<RawPath> raw;
    MultipathResult out;
    for (const Vec3& s : scene.scatterers) {
        const Vec3 to_s = s - ut.position;
        const Vec3 from_bs = s - scene.bs_position;
        if (to_s.norm() == 0.0 || from_bs.norm() == 0.0) {
            ++out.dropped;
            continue;
        }
        raw.push_back({to_s.norm() + from_bs.norm(), from_bs.normalized(), to_s.normalized()});
    }
    if (scene.include_los) {
        const Vec3 d = ut.position - scene.bs_position;
        if (d.norm() > 0.0) raw.push_back({d.norm(), d.normalized(), (-d).normalized()});
    }

    const Vec3 heading(std::cos(ut.heading), std::sin(ut.heading), 0.0);
    std::vector<double> weights;
    for (const RawPath& r : raw) {
        PathParams p;
        p.delay = r.length / kSpeedOfLight;
        if (!(p.delay < cfg.max_delay())) {
            ++out.dropped;
            continue;
        }
        arrival_angles(r.arrival, p.elevation, p.azimuth);
        p.doppler = ut.speed * heading.dot(r.departure) / geom.wavelength;
        out.set.paths.push_back(p);
        weights.push_back(std::pow(r.length, -scene.path_loss_exponent));
    }
    if (out.set.paths.empty()) throw DegenerateInputError("every path violates the cyclic prefix bound");
    double total = 0.0;
    for (double w : weights) total += w;
    for (std::size_t i = 0; i < weights.size(); ++i) out.set.paths[i].gain_variance = weights[i] / total;
    validate_multipath(out.set, cfg);
    return out;
}

MultipathSet snap_to_grid(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg) {
    const Theorem1Prediction pred = [&] {
        // Delay bins may round up to N_g; snap from the raw coordinates instead of the bounded bins.
        Theorem1Prediction p;
        const double mc = double(geom.m_cols), mr = double(geom.m_rows);
        for (const auto& path : mp.paths) {
            PathBins b;
            b.col = mc * geom.d_row / geom.wavelength * std::cos(path.elevation) + mc / 2.0;
            b.row = mr * geom.d_col / geom.wavelength * std::sin(path.elevation) * std::cos(path.azimuth) + mr / 2.0;
            b.delay = path.delay / cfg.sample_interval();
            b.doppler = double(cfg.symbols_per_frame()) * path.doppler * cfg.symbol_duration() +
                        double(cfg.slots_per_frame) / 2.0;
            b.power = path.gain_variance;
            p.paths.push_back(b);
        }
        return p;
    }();

    MultipathSet out;
    out.id = mp.id;
    const double mc = double(geom.m_cols), mr = double(geom.m_rows);
    for (const PathBins& b : pred.paths) {
        double c = std::nearbyint(b.col);
        double r = std::nearbyint(b.row);
        auto feasible = [&](double cc, double rr) {
            const double uc = (cc - mc / 2.0) * geom.wavelength / (mc * geom.d_row);
            const double ur = (rr - mr / 2.0) * geom.wavelength / (mr * geom.d_col);
            return std::fabs(uc) <= 1.0 && uc * uc + ur * ur <= 1.0 + 1e-12;
        };
        // Pull the row bin towards broadside first, then the column bin.
        while (!feasible(c, r) && r != std::nearbyint(mr / 2.0)) r += (r > mr / 2.0) ? -1.0 : 1.0;
        while (!feasible(c, r) && c != std::nearbyint(mc / 2.0)) c += (c > mc / 2.0) ? -1.0 : 1.0;
        const double d = std::clamp(std::nearbyint(b.delay), 0.0, double(cfg.cp_length) - 1.0);
        const double n = std::clamp(std::nearbyint(b.doppler), 0.0, double(cfg.slots_per_frame) - 1.0);
        out.paths.push_back(path_at_bins(c, r, d, n, b.power, geom, cfg));
    }
    return out;
}

double wrap_angle(double a) {
    const double two_pi = 2.0 * kPi;
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
}

std::size_t direction_class(double heading) {
    const double sector = kPi / 8.0;
    const double w = wrap_angle(heading + sector / 2.0);
    return std::size_t(std::floor(w / sector)) % kDirectionClasses;
}

double class_heading(std::size_t cls) {
    if (cls >= kDirectionClasses) throw ParameterError("direction class must be < 16");
    return double(cls) * kPi / 8.0;
}

}  // namespace tbf
