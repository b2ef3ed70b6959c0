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

#include "tbf/beamspace.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "tbf/errors.hpp"

namespace tbf {

namespace {

using RowMajorC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// exp(sign * i 2 pi num / den) with num reduced modulo den in exact integer arithmetic.
cplx root_of_unity(std::int64_t num, std::int64_t den, double sign) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return std::polar(1.0, sign * 2.0 * kPi * double(r) / double(den));
}

}  // namespace

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

Eigen::MatrixXcd angle_transform(std::size_t m) {
    if (m < 1) throw ParameterError("angle transform needs m >= 1");
    const auto mm = std::int64_t(m);
    const double scale = 1.0 / std::sqrt(double(m));
    Eigen::MatrixXcd w(mm, mm);
    for (std::int64_t i = 0; i < mm; ++i)
        for (std::int64_t j = 0; j < mm; ++j) w(i, j) = scale * root_of_unity(i * (2 * j - mm), 2 * mm, -1.0);
    return w;
}

Eigen::MatrixXcd delay_transform(std::size_t n_subcarriers, std::size_t n_cols) {
    if (n_subcarriers < 1 || n_cols < 1 || n_cols > n_subcarriers)
        throw ParameterError("delay transform needs 1 <= n_cols <= n_subcarriers");
    const auto nc = std::int64_t(n_subcarriers);
    const double scale = 1.0 / std::sqrt(double(n_subcarriers));
    Eigen::MatrixXcd w(nc, std::int64_t(n_cols));
    for (std::int64_t i = 0; i < nc; ++i)
        for (std::int64_t j = 0; j < std::int64_t(n_cols); ++j) w(i, j) = scale * root_of_unity(i * j, nc, -1.0);
    return w;
}

Eigen::MatrixXcd doppler_transform(std::size_t n_symbols, std::size_t n_cols, std::size_t symbols_per_slot,
                                   std::size_t first_symbol_index) {
    if (n_symbols < 1 || n_cols < 1 || symbols_per_slot < 1)
        throw ParameterError("Doppler transform needs positive extents");
    // (n_T + i/N_s)(2j - F)/(2F) = (n_T N_s + i)(2j - F) / (2 F N_s)
    const auto f = std::int64_t(n_cols);
    const auto ns = std::int64_t(symbols_per_slot);
    const std::int64_t den = 2 * f * ns;
    const std::int64_t base = (std::int64_t(first_symbol_index) % den) * ns % den;
    const double scale = 1.0 / std::sqrt(double(n_symbols));
    Eigen::MatrixXcd w(std::int64_t(n_symbols), f);
    for (std::int64_t i = 0; i < std::int64_t(n_symbols); ++i) {
        const std::int64_t t = (base + i) % den;
        for (std::int64_t j = 0; j < f; ++j) w(i, j) = scale * root_of_unity(t * (2 * j - f), den, 1.0);
    }
    return w;
}

TransformSet reduced_transform_matrices(const ArrayGeometry& geom, const OfdmConfig& cfg) {
    geom.validate();
    cfg.validate();
    TransformSet t;
    t.w_angle_col = angle_transform(geom.m_cols);
    t.w_angle_row = angle_transform(geom.m_rows);
    t.w_angle = kronecker(t.w_angle_col, t.w_angle_row);
    t.w_delay = delay_transform(cfg.n_subcarriers, cfg.cp_length);
    t.w_doppler = doppler_transform(cfg.symbols_per_frame(), cfg.slots_per_frame, cfg.symbols_per_slot,
                                    cfg.first_symbol_index);
    return t;
}

TransformSet transform_matrices(const ArrayGeometry& geom, const OfdmConfig& cfg) {
    TransformSet t = reduced_transform_matrices(geom, cfg);
    const std::size_t nt = cfg.symbols_per_frame();
    t.w_delay_full = delay_transform(cfg.n_subcarriers, cfg.n_subcarriers);
    t.w_doppler_full = doppler_transform(nt, nt, cfg.symbols_per_slot, cfg.first_symbol_index);
    return t;
}

CTensor3 mode_product(const Eigen::MatrixXcd& matrix, const CTensor3& x, std::size_t mode) {
    if (mode > 2) throw ParameterError("mode must be 0, 1 or 2");
    if (std::size_t(matrix.cols()) != x.extent(mode)) {
        throw ShapeError("mode-" + std::to_string(mode) + " product: matrix has " + std::to_string(matrix.cols()) +
                         " columns, tensor extent is " + std::to_string(x.extent(mode)));
    }
    auto d = x.dims();
    const auto rows = std::size_t(matrix.rows());
    const auto d0 = Eigen::Index(d[0]), d1 = Eigen::Index(d[1]), d2 = Eigen::Index(d[2]);
    const auto r = Eigen::Index(rows);
    if (mode == 0) {
        CTensor3 y(rows, d[1], d[2]);
        Eigen::Map<const RowMajorC> xm(x.data(), d0, d1 * d2);
        Eigen::Map<RowMajorC> ym(y.data(), r, d1 * d2);
        ym.noalias() = matrix * xm;
        return y;
    }
    if (mode == 2) {
        CTensor3 y(d[0], d[1], rows);
        Eigen::Map<const RowMajorC> xm(x.data(), d0 * d1, d2);
        Eigen::Map<RowMajorC> ym(y.data(), d0 * d1, r);
        ym.noalias() = xm * matrix.transpose();
        return y;
    }
    CTensor3 y(d[0], rows, d[2]);
    for (Eigen::Index i = 0; i < d0; ++i) {
        Eigen::Map<const RowMajorC> xs(x.data() + i * d1 * d2, d1, d2);
        Eigen::Map<RowMajorC> ys(y.data() + i * r * d2, r, d2);
        ys.noalias() = matrix * xs;
    }
    return y;
}

namespace {

void check_sft_shape(const CTensor3& h, const TransformSet& t) {
    if (h.extent(0) != std::size_t(t.w_angle.rows()) || h.extent(1) != std::size_t(t.w_delay.rows()) ||
        h.extent(2) != std::size_t(t.w_doppler.rows())) {
        throw ShapeError("SFT tensor " + shape_string(h.dims()) + " does not match the transform set");
    }
}

double projection_scale(const TransformSet& t) {
    return 1.0 / std::sqrt(double(t.w_angle.rows()) * double(t.w_delay.rows()) * double(t.w_doppler.rows()));
}

void scale_in_place(CTensor3& x, double s) {
    for (cplx& v : x.flat()) v *= s;
}

}  // namespace

TbTensor sft_to_tb(const SftTensor& h, const TransformSet& t) {
    check_sft_shape(h.data, t);
    CTensor3 y = mode_product(t.w_delay.adjoint(), h.data, 1);
    y = mode_product(t.w_doppler.adjoint(), y, 2);
    y = mode_product(t.w_angle.adjoint(), y, 0);
    scale_in_place(y, projection_scale(t));
    return TbTensor{std::move(y)};
}

SftTensor tb_to_sft(const TbTensor& h, const TransformSet& t) {
    if (h.data.extent(0) != std::size_t(t.w_angle.cols()) || h.data.extent(1) != std::size_t(t.w_delay.cols()) ||
        h.data.extent(2) != std::size_t(t.w_doppler.cols())) {
        throw ShapeError("TB tensor " + shape_string(h.data.dims()) + " does not match the transform set");
    }
    CTensor3 y = mode_product(t.w_angle, h.data, 0);
    y = mode_product(t.w_doppler, y, 2);
    y = mode_product(t.w_delay, y, 1);
    scale_in_place(y, 1.0 / projection_scale(t));
    return SftTensor{std::move(y)};
}

ExtensionPair extensions(const SftTensor& h, const TransformSet& t) {
    check_sft_shape(h.data, t);
    const double s = projection_scale(t);
    CTensor3 base = mode_product(t.w_angle.adjoint(), h.data, 0);
    base = mode_product(t.w_delay_full.adjoint(), base, 1);
    ExtensionPair out;
    out.delay_ext = mode_product(t.w_doppler.adjoint(), base, 2);
    out.delay_doppler_ext = mode_product(t.w_doppler_full.adjoint(), base, 2);
    scale_in_place(out.delay_ext, s);
    scale_in_place(out.delay_doppler_ext, s);
    return out;
}

namespace {

BeamFactors factors_with(const PathTensor& path, const Eigen::MatrixXcd& wa, const Eigen::MatrixXcd& wd,
                         const Eigen::MatrixXcd& wn) {
    if (path.space().size() != wa.rows() || path.freq().size() != wd.rows() || path.time().size() != wn.rows())
        throw ShapeError("path tensor does not match the transform set");
    BeamFactors f;
    f.angle = wa.adjoint() * path.space() / std::sqrt(double(wa.rows()));
    f.delay = wd.adjoint() * path.freq() / std::sqrt(double(wd.rows()));
    f.doppler = wn.adjoint() * path.time() / std::sqrt(double(wn.rows()));
    return f;
}

}  // namespace

BeamFactors beam_factors(const PathTensor& path, const TransformSet& t) {
    return factors_with(path, t.w_angle, t.w_delay, t.w_doppler);
}

BeamFactors extension_factors(const PathTensor& path, const TransformSet& t) {
    return factors_with(path, t.w_angle, t.w_delay_full, t.w_doppler_full);
}

TbTensor path_to_tb(const PathTensor& path, const TransformSet& t) {
    const BeamFactors f = beam_factors(path, t);
    return TbTensor{outer(f.angle, f.delay, f.doppler)};
}

CTensor3 outer(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXcd& c) {
    CTensor3 y(std::size_t(a.size()), std::size_t(b.size()), std::size_t(c.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            const cplx ab = a[i] * b[j];
            for (Eigen::Index k = 0; k < c.size(); ++k) y(std::size_t(i), std::size_t(j), std::size_t(k)) = ab * c[k];
        }
    return y;
}

}  // namespace tbf
