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

#include "tbf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "tbf/errors.hpp"
#include "tbf/random.hpp"

namespace tbf {

double dirichlet(std::size_t length, double x) {
    if (length < 1) throw ParameterError("Dirichlet kernel length must be >= 1");
    const double m = std::nearbyint(x);
    const double eps = x - m;
    const bool odd = (std::fmod(std::fabs(m), 2.0) == 1.0) && (length % 2 == 0);
    const double sign = odd ? -1.0 : 1.0;
    const double den = double(length) * std::sin(kPi * eps);
    if (den == 0.0) return sign;
    return sign * std::sin(double(length) * kPi * eps) / den;
}

double collinearity(const RTensor3& a, const RTensor3& b) {
    require_same_shape(a, b, "collinearity");
    const double na = frobenius(a);
    const double nb = frobenius(b);
    if (na == 0.0 || nb == 0.0) throw DegenerateInputError("collinearity of a zero-norm tensor");
    double dot = 0.0;
    auto fa = a.flat();
    auto fb = b.flat();
    for (std::size_t i = 0; i < fa.size(); ++i) dot += fa[i] * fb[i];
    return dot / (na * nb);
}

double collinearity(const Tbf& a, const Tbf& b) { return collinearity(a.data, b.data); }

namespace {

bool near_integer(double x) { return std::fabs(x - std::nearbyint(x)) <= kOnGridTolerance; }

std::size_t wrap_bin(double x, std::size_t m) {
    auto r = static_cast<long long>(std::nearbyint(x)) % static_cast<long long>(m);
    if (r < 0) r += static_cast<long long>(m);
    return std::size_t(r);
}

std::size_t bounded_bin(double x, std::size_t m, const char* what) {
    const double r = std::nearbyint(x);
    if (!(r >= 0.0 && r < double(m))) {
        throw RangeError(std::string(what) + " bin " + std::to_string(r) + " outside [0, " + std::to_string(m) + ")");
    }
    return std::size_t(r);
}

}  // namespace

Theorem1Prediction theorem1_indices(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg) {
    geom.validate();
    cfg.validate();
    validate_multipath(mp, cfg);
    const double mc = double(geom.m_cols);
    const double mr = double(geom.m_rows);
    Theorem1Prediction pred;
    pred.extents = {geom.m_cols, geom.m_rows, cfg.cp_length, cfg.slots_per_frame};
    for (const auto& p : mp.paths) {
        PathBins b;
        b.col = mc * geom.d_row / geom.wavelength * std::cos(p.elevation) + mc / 2.0;
        b.row = mr * geom.d_col / geom.wavelength * std::sin(p.elevation) * std::cos(p.azimuth) + mr / 2.0;
        b.delay = p.delay / cfg.sample_interval();
        b.doppler = double(cfg.symbols_per_frame()) * p.doppler * cfg.symbol_duration() +
                    double(cfg.slots_per_frame) / 2.0;
        b.col_bin = wrap_bin(b.col, geom.m_cols);
        b.row_bin = wrap_bin(b.row, geom.m_rows);
        b.angle_bin = b.col_bin * geom.m_rows + b.row_bin;
        b.delay_bin = bounded_bin(b.delay, cfg.cp_length, "delay");
        b.doppler_bin = bounded_bin(b.doppler, cfg.slots_per_frame, "Doppler");
        b.on_grid_angle = near_integer(b.col) && near_integer(b.row);
        b.on_grid_delay = near_integer(b.delay);
        b.on_grid_doppler = near_integer(b.doppler);
        b.power = p.gain_variance;
        pred.paths.push_back(b);
    }
    return pred;
}

namespace {

struct Window {
    std::array<std::size_t, 4> half{0, 0, 0, 0};
    std::array<std::size_t, 4> extent{0, 0, 0, 0};

    static std::size_t circ_dist(std::size_t a, std::size_t b, std::size_t m) {
        const std::size_t d = a > b ? a - b : b - a;
        return std::min(d, m - d);
    }
    static std::size_t lin_dist(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

    bool contains(const PathBins& centre, std::size_t c, std::size_t r, std::size_t d, std::size_t n) const {
        return circ_dist(c, centre.col_bin, extent[0]) <= half[0] && circ_dist(r, centre.row_bin, extent[1]) <= half[1] &&
               lin_dist(d, centre.delay_bin) <= half[2] && lin_dist(n, centre.doppler_bin) <= half[3];
    }
};

}  // namespace

ConcentrationReport theorem1_check(const Tbf& f, const Theorem1Prediction& pred, double window) {
    const auto& e = pred.extents;
    if (f.data.extent(0) != e[0] * e[1] || f.data.extent(1) != e[2] || f.data.extent(2) != e[3]) {
        throw ShapeError("fingerprint " + shape_string(f.data.dims()) + " does not match the prediction extents");
    }
    if (!(window >= 0.0 && window <= 0.5)) throw ParameterError("window must lie in [0, 0.5]");
    if (sum(f.data) <= 0.0) throw DegenerateInputError("zero fingerprint");

    Window w;
    w.extent = e;
    for (std::size_t a = 0; a < 4; ++a) w.half[a] = std::size_t(std::floor(window * double(e[a]) + 1e-9));

    const std::size_t np = pred.paths.size();
    std::vector<double> in_window(np, 0.0);
    double union_energy = 0.0;
    for (std::size_t c = 0; c < e[0]; ++c)
        for (std::size_t r = 0; r < e[1]; ++r)
            for (std::size_t d = 0; d < e[2]; ++d)
                for (std::size_t n = 0; n < e[3]; ++n) {
                    const double v = f.data(c * e[1] + r, d, n);
                    bool any = false;
                    for (std::size_t p = 0; p < np; ++p) {
                        if (w.contains(pred.paths[p], c, r, d, n)) {
                            in_window[p] += v;
                            any = true;
                        }
                    }
                    if (any) union_energy += v;
                }

    ConcentrationReport rep;
    double total_power = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        total_power += pred.paths[p].power;
        // Power of every path predicted inside this path's window.
        double expected = 0.0;
        for (const auto& q : pred.paths)
            if (w.contains(pred.paths[p], q.col_bin, q.row_bin, q.delay_bin, q.doppler_bin)) expected += q.power;
        const double frac = expected > 0.0 ? in_window[p] / expected : 0.0;
        rep.per_path.push_back(std::clamp(frac, 0.0, 1.0));
    }
    rep.total = total_power > 0.0 ? std::clamp(union_energy / total_power, 0.0, 1.0) : 0.0;
    return rep;
}

CollinearityReport theorem2_check(const MultipathSet& mp1, const MultipathSet& mp2, const ArrayGeometry& geom,
                                  const OfdmConfig& cfg, SftfRoute route, std::size_t cap) {
    const TransformSet t = reduced_transform_matrices(geom, cfg);
    CollinearityReport rep;
    rep.xi_tbf = collinearity(tbf_exact(mp1, geom, cfg, t), tbf_exact(mp2, geom, cfg, t));

    if (route != SftfRoute::Materialized) {
        const SftfInner in = sftf_inner_closed(mp1, mp2, geom, cfg);
        if (in.norm1 == 0.0 || in.norm2 == 0.0) throw DegenerateInputError("zero-norm SFTF");
        rep.xi_sftf = in.trace / (in.norm1 * in.norm2);
    }
    if (route != SftfRoute::Analytic) {
        const Sftf x1 = sftf_small(mp1, geom, cfg, cap);
        const Sftf x2 = sftf_small(mp2, geom, cfg, cap);
        const double n1 = std::sqrt(sftf_trace(x1, x1));
        const double n2 = std::sqrt(sftf_trace(x2, x2));
        if (n1 == 0.0 || n2 == 0.0) throw DegenerateInputError("zero-norm SFTF");
        rep.xi_sftf_materialized = sftf_trace(x1, x2) / (n1 * n2);
        if (route == SftfRoute::Materialized) rep.xi_sftf = *rep.xi_sftf_materialized;
    }
    rep.abs_gap = std::fabs(rep.xi_tbf - rep.xi_sftf);
    return rep;
}

double lemma5_check(std::uint64_t seed, std::array<std::size_t, 3> dims, MatrixKind kind) {
    for (auto d : dims)
        if (d < 1 || d > 16) throw ParameterError("lemma5_check expects 1 <= extent <= 16");
    Rng rng(derive_seed(seed, streams::verify, 5));
    CTensor3 t1(dims[0], dims[1], dims[2]);
    CTensor3 t2(dims[0], dims[1], dims[2]);
    for (cplx& v : t1.flat()) v = complex_normal(rng, 1.0);
    for (cplx& v : t2.flat()) v = complex_normal(rng, 1.0);

    auto inner = [](const CTensor3& a, const CTensor3& b) {
        cplx s = 0.0;
        auto fa = a.flat();
        auto fb = b.flat();
        for (std::size_t i = 0; i < fa.size(); ++i) s += fa[i] * std::conj(fb[i]);
        return s;
    };
    const cplx reference = inner(t1, t2);

    double worst = 0.0;
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    for (std::size_t mode = 0; mode < 3; ++mode) {
        const auto n = Eigen::Index(dims[mode]);
        Eigen::MatrixXcd o;
        switch (kind) {
            case MatrixKind::Identity:
                o = Eigen::MatrixXcd::Identity(n, n);
                break;
            case MatrixKind::Dft: {
                // Unitary DFT with random column phases.
                o = delay_transform(std::size_t(n), std::size_t(n));
                for (Eigen::Index j = 0; j < n; ++j) o.col(j) *= std::polar(1.0, phase(rng));
                break;
            }
            case MatrixKind::NonUnitary: {
                o.resize(n, n);
                for (Eigen::Index i = 0; i < n; ++i)
                    for (Eigen::Index j = 0; j < n; ++j) o(i, j) = complex_normal(rng, 1.0);
                break;
            }
        }
        const cplx transformed = inner(mode_product(o, t1, mode), mode_product(o, t2, mode));
        worst = std::max(worst, std::abs(transformed - reference));
    }
    return worst;
}

Lemma4Report lemma4_check(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg) {
    validate_multipath(mp, cfg);
    std::vector<cplx> gains;
    for (const auto& p : mp.paths) gains.emplace_back(std::sqrt(p.gain_variance), 0.0);
    const TransformSet t = transform_matrices(geom, cfg);
    const SftTensor h = assemble_sft(mp, gains, geom, cfg);
    const ExtensionPair ext = extensions(h, t);

    Lemma4Report rep;
    const CTensor3& hd = ext.delay_ext;
    const double total_dot = std::pow(frobenius(hd), 2);
    double tail = 0.0;
    for (std::size_t a = 0; a < hd.extent(0); ++a)
        for (std::size_t c = cfg.cp_length; c < hd.extent(1); ++c)
            for (std::size_t n = 0; n < hd.extent(2); ++n) tail += std::norm(hd(a, c, n));
    rep.delay_deviation = total_dot > 0.0 ? std::sqrt(tail / total_dot) : 0.0;

    const CTensor3& hdd = ext.delay_doppler_ext;
    const std::size_t ns = cfg.symbols_per_slot;
    double diff = 0.0;
    double sampled = 0.0;
    double all = 0.0;
    for (std::size_t a = 0; a < hdd.extent(0); ++a)
        for (std::size_t c = 0; c < hdd.extent(1); ++c)
            for (std::size_t n = 0; n < hdd.extent(2); ++n) {
                const double e = std::norm(hdd(a, c, n));
                all += e;
                if (n % ns == 0) {
                    sampled += e;
                    diff += std::norm(hdd(a, c, n) - hd(a, c, n / ns));
                }
            }
    rep.doppler_deviation = total_dot > 0.0 ? std::sqrt(diff / total_dot) : 0.0;
    rep.doppler_interstitial = all > 0.0 ? (all - sampled) / all : 0.0;
    return rep;
}

double trace_identity_deviation(const MultipathSet& mp1, const MultipathSet& mp2, const ArrayGeometry& geom,
                                const OfdmConfig& cfg) {
    validate_multipath(mp1, cfg);
    validate_multipath(mp2, cfg);
    const TransformSet t = transform_matrices(geom, cfg);
    // Dense extended TB tensor of each unit-gain path, flattened.
    auto extended = [&](const MultipathSet& mp) {
        std::vector<Eigen::VectorXcd> out;
        for (const auto& p : mp.paths) {
            const SftTensor h = path_tensor(p, geom, cfg).materialize(kDefaultSftfCap);
            const CTensor3 e = extensions(h, t).delay_doppler_ext;
            out.emplace_back(Eigen::Map<const Eigen::VectorXcd>(e.data(), Eigen::Index(e.size())));
        }
        return out;
    };
    const auto y1 = extended(mp1);
    const auto y2 = extended(mp2);
    double lhs = 0.0;
    for (std::size_t p = 0; p < y1.size(); ++p)
        for (std::size_t q = 0; q < y2.size(); ++q)
            lhs += mp1.paths[p].gain_variance * mp2.paths[q].gain_variance * std::norm(y1[p].dot(y2[q]));
    const double scale = double(geom.antennas()) * double(cfg.n_subcarriers) * double(cfg.symbols_per_frame());
    const double rhs = sftf_inner_closed(mp1, mp2, geom, cfg).trace;
    if (rhs == 0.0) throw DegenerateInputError("zero SFTF trace");
    return std::fabs(lhs * scale * scale - rhs) / rhs;
}

PathParams path_at_bins(double col, double row, double delay, double doppler, double power,
                        const ArrayGeometry& geom, const OfdmConfig& cfg) {
    geom.validate();
    cfg.validate();
    const double mc = double(geom.m_cols);
    const double mr = double(geom.m_rows);
    const double cos_theta = (col - mc / 2.0) * geom.wavelength / (mc * geom.d_row);
    const double u_row = (row - mr / 2.0) * geom.wavelength / (mr * geom.d_col);
    if (std::fabs(cos_theta) > 1.0) throw RangeError("column bin not reachable by any elevation");
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    double cos_phi = 0.0;
    if (sin_theta > 0.0) {
        cos_phi = u_row / sin_theta;
    } else if (u_row != 0.0) {
        throw RangeError("row bin not reachable at end-fire elevation");
    }
    if (std::fabs(cos_phi) > 1.0) throw RangeError("angle bins (col, row) are not jointly reachable");
    PathParams p;
    p.gain_variance = power;
    p.elevation = std::acos(cos_theta);
    p.azimuth = std::acos(cos_phi);
    p.delay = delay * cfg.sample_interval();
    p.doppler = (doppler - double(cfg.slots_per_frame) / 2.0) * cfg.doppler_resolution();
    validate_path(p, cfg);
    return p;
}

std::vector<double> concentration_sweep(const OffGridPath& path, SweepAxis axis, std::size_t n_doublings,
                                        const ArrayGeometry& geom, const OfdmConfig& cfg, double window) {
    std::vector<double> out;
    ArrayGeometry g = geom;
    OfdmConfig c = cfg;
    for (std::size_t s = 0; s <= n_doublings; ++s) {
        if (s > 0) {
            switch (axis) {
                case SweepAxis::AngleCol: g.m_cols *= 2; break;
                case SweepAxis::AngleRow: g.m_rows *= 2; break;
                case SweepAxis::Delay:
                    c.n_subcarriers *= 2;
                    c.cp_length *= 2;
                    break;
                case SweepAxis::Doppler: c.slots_per_frame *= 2; break;
            }
        }
        const std::array<std::size_t, 4> ext{g.m_cols, g.m_rows, c.cp_length, c.slots_per_frame};
        std::array<double, 4> loc{};
        for (std::size_t a = 0; a < 4; ++a) loc[a] = std::floor(path.anchor[a] * double(ext[a])) + path.offset[a];
        MultipathSet mp;
        mp.paths.push_back(path_at_bins(loc[0], loc[1], loc[2], loc[3], path.power, g, c));

        const Tbf f = tbf_exact(mp, g, c, reduced_transform_matrices(g, c));
        out.push_back(theorem1_check(f, theorem1_indices(mp, g, c), window).per_path.front());
    }
    return out;
}

// Random multipath set with fractional TB coordinates.
MultipathSet random_off_grid_set(std::size_t n_paths, const ArrayGeometry& g, const OfdmConfig& cfg, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> power(0.1, 1.0);
    MultipathSet mp;
    while (mp.paths.size() < n_paths) {
        try {
            mp.paths.push_back(path_at_bins(u(rng) * double(g.m_cols), u(rng) * double(g.m_rows),
                                            u(rng) * double(cfg.cp_length), u(rng) * double(cfg.slots_per_frame - 1),
                                            power(rng), g, cfg));
        } catch (const RangeError&) {
            // angle pair not jointly reachable; redraw
        }
    }
    return mp;
}

// Random on-grid multipath set.
MultipathSet random_on_grid_set(std::size_t n_paths, const ArrayGeometry& g, const OfdmConfig& cfg, Rng& rng) {
    std::uniform_int_distribution<std::size_t> col(0, g.m_cols - 1), row(0, g.m_rows - 1),
        delay(0, cfg.cp_length - 1), dop(0, cfg.slots_per_frame - 1);
    std::uniform_real_distribution<double> power(0.1, 1.0);
    MultipathSet mp;
    while (mp.paths.size() < n_paths) {
        try {
            mp.paths.push_back(path_at_bins(double(col(rng)), double(row(rng)), double(delay(rng)), double(dop(rng)),
                                            power(rng), g, cfg));
        } catch (const RangeError&) {
            // angle pair not jointly reachable; redraw
        }
    }
    return mp;
}

}  // namespace tbf
