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

#include "tbf/channel_model.hpp"

#include <cmath>
#include <string>

#include "tbf/errors.hpp"
#include "tbf/random.hpp"

namespace tbf {

namespace {

// exp(i 2 pi cycles), reducing the argument first so large phases keep full precision.
cplx phasor(double cycles) {
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, 2.0 * kPi * frac);
}

// Relative slack for bounds that snapped parameters sit exactly on.
constexpr double kBoundSlack = 1e-9;

}  // namespace

void ArrayGeometry::validate() const {
    if (m_rows < 1 || m_cols < 1) throw ParameterError("array needs at least one antenna per row and column");
    if (!(d_row > 0.0) || !(d_col > 0.0)) throw ParameterError("antenna spacings must be positive");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw ParameterError("wavelength must be positive");
}

ArrayGeometry ArrayGeometry::half_wavelength(std::size_t m_rows, std::size_t m_cols, double carrier_hz) {
    if (!(carrier_hz > 0.0)) throw ParameterError("carrier frequency must be positive");
    ArrayGeometry g;
    g.m_rows = m_rows;
    g.m_cols = m_cols;
    g.wavelength = kSpeedOfLight / carrier_hz;
    g.d_row = g.wavelength / 2.0;
    g.d_col = g.wavelength / 2.0;
    return g;
}

void OfdmConfig::validate() const {
    if (n_subcarriers < 1) throw ParameterError("n_subcarriers must be positive");
    if (cp_length < 1 || cp_length >= n_subcarriers) throw ParameterError("cp_length must satisfy 1 <= N_g < N_c");
    if (!(subcarrier_spacing > 0.0) || !std::isfinite(subcarrier_spacing))
        throw ParameterError("subcarrier_spacing must be positive");
    if (slots_per_frame < 1) throw ParameterError("slots_per_frame must be positive");
    if (symbols_per_slot < 1) throw ParameterError("symbols_per_slot must be positive");
}

double MultipathSet::total_power() const {
    double s = 0.0;
    for (const auto& p : paths) s += p.gain_variance;
    return s;
}

void validate_path(const PathParams& p, const OfdmConfig& cfg) {
    if (!(p.gain_variance >= 0.0) || !std::isfinite(p.gain_variance))
        throw ParameterError("gain variance must be finite and nonnegative");
    if (!(p.elevation >= 0.0 && p.elevation <= kPi)) throw RangeError("elevation outside [0, pi]");
    if (!(p.azimuth >= 0.0 && p.azimuth <= kPi)) throw RangeError("azimuth outside [0, pi]");
    if (!(p.delay >= 0.0)) throw RangeError("negative or non-finite delay");
    if (!(p.delay < cfg.max_delay())) {
        throw RangeError("delay " + std::to_string(p.delay) + " s violates the cyclic prefix bound " +
                         std::to_string(cfg.max_delay()) + " s");
    }
    const double slack = kBoundSlack * cfg.doppler_resolution();
    if (!(p.doppler >= cfg.min_doppler() - slack && p.doppler <= cfg.max_doppler() + slack)) {
        throw RangeError("Doppler " + std::to_string(p.doppler) + " Hz outside [" +
                         std::to_string(cfg.min_doppler()) + ", " + std::to_string(cfg.max_doppler()) + "] Hz");
    }
}

void validate_multipath(const MultipathSet& mp, const OfdmConfig& cfg) {
    if (mp.paths.empty()) throw ParameterError("multipath set is empty");
    for (const auto& p : mp.paths) validate_path(p, cfg);
}

SteeringSet steering_vectors(const PathParams& p, const ArrayGeometry& geom, const OfdmConfig& cfg) {
    geom.validate();
    cfg.validate();
    validate_path(p, cfg);

    const auto mc = Eigen::Index(geom.m_cols);
    const auto mr = Eigen::Index(geom.m_rows);
    const auto nc = Eigen::Index(cfg.n_subcarriers);
    const auto nt = Eigen::Index(cfg.symbols_per_frame());

    SteeringSet s;
    const double u_col = geom.d_row / geom.wavelength * std::cos(p.elevation);
    const double u_row = geom.d_col / geom.wavelength * std::sin(p.elevation) * std::cos(p.azimuth);
    s.f_col.resize(mc);
    for (Eigen::Index m = 0; m < mc; ++m) s.f_col[m] = phasor(-double(m) * u_col);
    s.f_row.resize(mr);
    for (Eigen::Index m = 0; m < mr; ++m) s.f_row[m] = phasor(-double(m) * u_row);
    s.f_upa.resize(mc * mr);
    for (Eigen::Index c = 0; c < mc; ++c)
        for (Eigen::Index r = 0; r < mr; ++r) s.f_upa[c * mr + r] = s.f_col[c] * s.f_row[r];

    const double tau_df = p.delay * cfg.subcarrier_spacing;
    s.f_freq.resize(nc);
    for (Eigen::Index c = 0; c < nc; ++c) s.f_freq[c] = phasor(-double(c) * tau_df);

    const double nu_tsym = p.doppler * cfg.symbol_duration();
    const double offset = double(cfg.first_symbol_index) * double(cfg.symbols_per_slot) * nu_tsym;
    s.f_time.resize(nt);
    for (Eigen::Index n = 0; n < nt; ++n) s.f_time[n] = phasor(offset) * phasor(double(n) * nu_tsym);
    return s;
}

PathTensor::PathTensor(Eigen::VectorXcd space, Eigen::VectorXcd freq, Eigen::VectorXcd time)
    : space_(std::move(space)), freq_(std::move(freq)), time_(std::move(time)) {}

SftTensor PathTensor::materialize(std::size_t cap) const {
    if (element_count() > cap) {
        throw SizeError("rank-1 tensor with " + std::to_string(element_count()) + " entries exceeds cap " +
                        std::to_string(cap));
    }
    const auto a = std::size_t(space_.size());
    const auto c = std::size_t(freq_.size());
    const auto n = std::size_t(time_.size());
    SftTensor out{CTensor3(a, c, n)};
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const cplx sf = space_[Eigen::Index(i)] * freq_[Eigen::Index(j)];
            for (std::size_t k = 0; k < n; ++k) out.data(i, j, k) = sf * time_[Eigen::Index(k)];
        }
    return out;
}

PathTensor path_tensor(const PathParams& path, const ArrayGeometry& geom, const OfdmConfig& cfg) {
    SteeringSet s = steering_vectors(path, geom, cfg);
    return PathTensor(std::move(s.f_upa), std::move(s.f_freq), std::move(s.f_time));
}

Eigen::MatrixXcd draw_gains(std::span<const double> variances, std::uint64_t seed, std::size_t n_draws) {
    Eigen::MatrixXcd g(Eigen::Index(n_draws), Eigen::Index(variances.size()));
    for (std::size_t d = 0; d < n_draws; ++d) {
        Rng rng(derive_seed(seed, streams::gains, d));
        for (std::size_t p = 0; p < variances.size(); ++p) {
            if (variances[p] < 0.0) throw ParameterError("negative gain variance");
            g(Eigen::Index(d), Eigen::Index(p)) = complex_normal(rng, variances[p]);
        }
    }
    return g;
}

SftTensor assemble_sft(const MultipathSet& mp, std::span<const cplx> gains, const ArrayGeometry& geom,
                       const OfdmConfig& cfg, std::size_t cap) {
    validate_multipath(mp, cfg);
    if (gains.size() != mp.size()) {
        throw ParameterError("gain count " + std::to_string(gains.size()) + " does not match path count " +
                             std::to_string(mp.size()));
    }
    const std::size_t a = geom.antennas();
    const std::size_t nc = cfg.n_subcarriers;
    const std::size_t nt = cfg.symbols_per_frame();
    if (a * nc * nt > cap) throw SizeError("SFT tensor exceeds materialization cap");
    SftTensor h{CTensor3(a, nc, nt)};
    for (std::size_t p = 0; p < mp.size(); ++p) {
        const PathTensor pt = path_tensor(mp.paths[p], geom, cfg);
        for (std::size_t i = 0; i < a; ++i)
            for (std::size_t j = 0; j < nc; ++j) {
                const cplx sf = gains[p] * pt.space()[Eigen::Index(i)] * pt.freq()[Eigen::Index(j)];
                for (std::size_t k = 0; k < nt; ++k) h.data(i, j, k) += sf * pt.time()[Eigen::Index(k)];
            }
    }
    return h;
}

}  // namespace tbf
