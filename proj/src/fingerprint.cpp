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

#include "tbf/fingerprint.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tbf/errors.hpp"
#include "tbf/random.hpp"

namespace tbf {

namespace {

RTensor3 zero_tbf(const ArrayGeometry& geom, const OfdmConfig& cfg) {
    return RTensor3(geom.antennas(), cfg.cp_length, cfg.slots_per_frame, 0.0);
}

void accumulate_power(RTensor3& acc, double weight, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                      const Eigen::VectorXd& c) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double wa = weight * a[i];
        if (wa == 0.0) continue;
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            const double wab = wa * b[j];
            double* row = &acc(std::size_t(i), std::size_t(j), 0);
            for (Eigen::Index k = 0; k < c.size(); ++k) row[k] += wab * c[k];
        }
    }
}

// Everything a Monte-Carlo draw needs that does not depend on the draw index.
struct DrawContext {
    std::vector<double> variances;
    std::vector<BeamFactors> factors;  // per path, TB domain
    std::vector<PathTensor> paths;     // per path, SFT domain (Sft route)
    Eigen::MatrixXcd gram;             // gram(q, p) = <f_q, f_p> over the full SFT vector
    double sft_elements = 0.0;         // A N_c N_t
    double noise_ratio = 0.0;
};

DrawContext make_context(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                         const TransformSet& t, const MonteCarloOptions& opt) {
    validate_multipath(mp, cfg);
    if (opt.n_draws == 0) throw ParameterError("n_draws must be positive");
    DrawContext ctx;
    ctx.noise_ratio = noise_ratio(opt.snr_db);
    ctx.sft_elements = double(geom.antennas()) * double(cfg.n_subcarriers) * double(cfg.symbols_per_frame());
    const auto np = Eigen::Index(mp.size());
    ctx.gram.resize(np, np);
    for (const auto& p : mp.paths) {
        ctx.variances.push_back(p.gain_variance);
        ctx.paths.push_back(path_tensor(p, geom, cfg));
        ctx.factors.push_back(beam_factors(ctx.paths.back(), t));
    }
    for (Eigen::Index q = 0; q < np; ++q)
        for (Eigen::Index p = 0; p < np; ++p) {
            const PathTensor& a = ctx.paths[std::size_t(q)];
            const PathTensor& b = ctx.paths[std::size_t(p)];
            ctx.gram(q, p) = a.space().dot(b.space()) * a.freq().dot(b.freq()) * a.time().dot(b.time());
        }
    return ctx;
}

RTensor3 draw_power(const DrawContext& ctx, const ArrayGeometry& geom, const OfdmConfig& cfg,
                    const TransformSet& t, const MonteCarloOptions& opt, std::size_t index) {
    const Eigen::MatrixXcd g = draw_gains(ctx.variances, derive_seed(opt.seed, streams::gains, index), 1);
    const Eigen::VectorXcd beta = g.row(0).transpose();
    const std::uint64_t noise_seed = derive_seed(opt.seed, streams::noise, index);

    CTensor3 tb;
    if (opt.noise_domain == NoiseDomain::Sft) {
        std::vector<cplx> gains(beta.data(), beta.data() + beta.size());
        SftTensor sft{CTensor3(geom.antennas(), cfg.n_subcarriers, cfg.symbols_per_frame())};
        for (std::size_t p = 0; p < ctx.paths.size(); ++p) {
            const PathTensor& pt = ctx.paths[p];
            for (Eigen::Index i = 0; i < pt.space().size(); ++i)
                for (Eigen::Index j = 0; j < pt.freq().size(); ++j) {
                    const cplx sf = gains[p] * pt.space()[i] * pt.freq()[j];
                    cplx* row = &sft.data(std::size_t(i), std::size_t(j), 0);
                    for (Eigen::Index k = 0; k < pt.time().size(); ++k) row[k] += sf * pt.time()[k];
                }
        }
        tb = sft_to_tb(add_awgn(sft, opt.snr_db, noise_seed), t).data;
    } else {
        tb = CTensor3(geom.antennas(), cfg.cp_length, cfg.slots_per_frame);
        for (std::size_t p = 0; p < ctx.factors.size(); ++p) {
            const BeamFactors& f = ctx.factors[p];
            for (Eigen::Index i = 0; i < f.angle.size(); ++i) {
                const cplx ba = beta[Eigen::Index(p)] * f.angle[i];
                for (Eigen::Index j = 0; j < f.delay.size(); ++j) {
                    const cplx bad = ba * f.delay[j];
                    cplx* row = &tb(std::size_t(i), std::size_t(j), 0);
                    for (Eigen::Index k = 0; k < f.doppler.size(); ++k) row[k] += bad * f.doppler[k];
                }
            }
        }
        if (ctx.noise_ratio > 0.0) {
            // Mean SFT-domain signal power of this realization, from path overlaps.
            const double energy = std::real(beta.dot(ctx.gram * beta));
            const double sft_noise = energy / ctx.sft_elements * ctx.noise_ratio;
            const double tb_noise = sft_noise / ctx.sft_elements;
            Rng rng(noise_seed);
            for (cplx& v : tb.flat()) v += complex_normal(rng, tb_noise);
        }
    }
    RTensor3 out(tb.extent(0), tb.extent(1), tb.extent(2));
    auto src = tb.flat();
    auto dst = out.flat();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::norm(src[i]);
    return out;
}

}  // namespace

Tbf tbf_exact(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg) {
    return tbf_exact(mp, geom, cfg, reduced_transform_matrices(geom, cfg));
}

Tbf tbf_exact(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg, const TransformSet& t) {
    validate_multipath(mp, cfg);
    Tbf f{zero_tbf(geom, cfg), TbfMeta{mp.id, std::nullopt, 0}};
    for (const auto& p : mp.paths) {
        if (p.gain_variance == 0.0) continue;
        const BeamFactors b = beam_factors(path_tensor(p, geom, cfg), t);
        accumulate_power(f.data, p.gain_variance, b.angle.cwiseAbs2(), b.delay.cwiseAbs2(), b.doppler.cwiseAbs2());
    }
    return f;
}

Tbf tbf_monte_carlo(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                    const MonteCarloOptions& opt) {
    return tbf_monte_carlo(mp, geom, cfg, reduced_transform_matrices(geom, cfg), opt);
}

Tbf tbf_monte_carlo(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                    const TransformSet& t, const MonteCarloOptions& opt) {
    const DrawContext ctx = make_context(mp, geom, cfg, t, opt);
    Tbf f{zero_tbf(geom, cfg), TbfMeta{mp.id, opt.snr_db, opt.n_draws}};
    auto acc = f.data.flat();
    for (std::size_t d = 0; d < opt.n_draws; ++d) {
        const RTensor3 p = draw_power(ctx, geom, cfg, t, opt, d);
        auto src = p.flat();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += src[i];
    }
    const double inv = 1.0 / double(opt.n_draws);
    for (double& v : acc) v *= inv;
    return f;
}

RTensor3 monte_carlo_draw(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                          const TransformSet& t, const MonteCarloOptions& opt, std::size_t index) {
    MonteCarloOptions one = opt;
    one.n_draws = 1;
    return draw_power(make_context(mp, geom, cfg, t, one), geom, cfg, t, opt, index);
}

Sftf sftf_small(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg, std::size_t cap) {
    validate_multipath(mp, cfg);
    const std::size_t a = geom.antennas();
    const std::size_t nc = cfg.n_subcarriers;
    const std::size_t nt = cfg.symbols_per_frame();
    const std::size_t n = a * nc * nt;
    if (n > cap) {
        throw SizeError("SFTF triple " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
    }
    Sftf x;
    x.triple = {a, nc, nt};
    x.data = Eigen::MatrixXcd::Zero(Eigen::Index(n), Eigen::Index(n));
    for (const auto& p : mp.paths) {
        const SftTensor h = path_tensor(p, geom, cfg).materialize();
        Eigen::Map<const Eigen::VectorXcd> v(h.data.data(), Eigen::Index(n));
        x.data.noalias() += p.gain_variance * (v * v.adjoint());
    }
    return x;
}

double sftf_trace(const Sftf& a, const Sftf& b) {
    if (a.data.rows() != b.data.rows() || a.data.cols() != b.data.cols())
        throw ShapeError("SFTF shapes differ");
    return std::real((a.data.array() * b.data.array().conjugate()).sum());
}

SftfInner sftf_inner_closed(const MultipathSet& mp1, const MultipathSet& mp2, const ArrayGeometry& geom,
                            const OfdmConfig& cfg) {
    validate_multipath(mp1, cfg);
    validate_multipath(mp2, cfg);
    std::vector<PathTensor> t1, t2;
    for (const auto& p : mp1.paths) t1.push_back(path_tensor(p, geom, cfg));
    for (const auto& p : mp2.paths) t2.push_back(path_tensor(p, geom, cfg));
    auto overlap2 = [](const PathTensor& x, const PathTensor& y) {
        const cplx o = x.space().dot(y.space()) * x.freq().dot(y.freq()) * x.time().dot(y.time());
        return std::norm(o);
    };
    auto cross = [&](const MultipathSet& ma, const std::vector<PathTensor>& ta, const MultipathSet& mb,
                     const std::vector<PathTensor>& tb) {
        double s = 0.0;
        for (std::size_t p = 0; p < ta.size(); ++p)
            for (std::size_t q = 0; q < tb.size(); ++q)
                s += ma.paths[p].gain_variance * mb.paths[q].gain_variance * overlap2(ta[p], tb[q]);
        return s;
    };
    SftfInner r;
    r.trace = cross(mp1, t1, mp2, t2);
    r.norm1 = std::sqrt(cross(mp1, t1, mp1, t1));
    r.norm2 = std::sqrt(cross(mp2, t2, mp2, t2));
    return r;
}

double noise_ratio(std::optional<double> snr_db) {
    if (!snr_db) return 0.0;
    const double s = *snr_db;
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
        throw ParameterError("SNR must be a number above -inf dB");
    if (s == std::numeric_limits<double>::infinity()) return 0.0;
    return std::pow(10.0, -s / 10.0);
}

SftTensor add_awgn(const SftTensor& h, std::optional<double> snr_db, std::uint64_t seed) {
    const double ratio = noise_ratio(snr_db);
    SftTensor out = h;
    if (ratio == 0.0 || h.data.empty()) return out;
    double power = 0.0;
    for (const cplx& v : h.data.flat()) power += std::norm(v);
    power /= double(h.data.size());
    const double var = power * ratio;
    Rng rng(seed);
    for (cplx& v : out.data.flat()) v += complex_normal(rng, var);
    return out;
}

}  // namespace tbf
