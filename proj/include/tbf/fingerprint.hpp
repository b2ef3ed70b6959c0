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
#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "tbf/beamspace.hpp"
#include "tbf/channel_model.hpp"
#include "tbf/tensor.hpp"

namespace tbf {

struct TbfMeta {
    std::uint64_t source_id = 0;
    std::optional<double> snr_db;  // absent = noiseless
    std::size_t n_draws = 0;       // 0 = exact expectation
};

// Triple-beam fingerprint: expected TB-domain power, A x N_g x N_f, nonnegative.
struct Tbf {
    RTensor3 data;
    TbfMeta meta;
};

// Where simulated AWGN is drawn. Sft adds noise to the materialized SFT channel and transforms
// it; Beam draws the identically distributed projection of that noise directly in the TB domain.
enum class NoiseDomain { Sft, Beam };

struct MonteCarloOptions {
    std::size_t n_draws = 100;
    std::uint64_t seed = 0;
    std::optional<double> snr_db;  // nullopt or +inf -> no noise
    NoiseDomain noise_domain = NoiseDomain::Beam;
};

Tbf tbf_exact(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg);
Tbf tbf_exact(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg, const TransformSet& t);

Tbf tbf_monte_carlo(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                    const MonteCarloOptions& opt);
Tbf tbf_monte_carlo(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                    const TransformSet& t, const MonteCarloOptions& opt);

// Per-draw power tensor |H_TB|^2 of draw `index`; the Monte-Carlo estimate is the mean of these.
RTensor3 monte_carlo_draw(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                          const TransformSet& t, const MonteCarloOptions& opt, std::size_t index);

// SFT covariance tensor, stored as the (A N_c N_t) x (A N_c N_t) matrix of the 6-way tensor with the
// front index triple flattened into rows and the back triple into columns.
struct Sftf {
    Eigen::MatrixXcd data;
    std::array<std::size_t, 3> triple{0, 0, 0};  // (A, N_c, N_t)
};

inline constexpr std::size_t kDefaultSftfCap = 4096;

Sftf sftf_small(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg,
                std::size_t cap = kDefaultSftfCap);

// Pseudo-diagonal trace of A (x) B*, i.e. Sum(A . conj(B)).
double sftf_trace(const Sftf& a, const Sftf& b);

struct SftfInner {
    double trace = 0.0;  // Tr{X1 (x) X2*}
    double norm1 = 0.0;  // ||X1||_F
    double norm2 = 0.0;  // ||X2||_F
};

// Closed-form SFTF inner product from per-path steering overlaps; no 6-tensor is formed.
SftfInner sftf_inner_closed(const MultipathSet& mp1, const MultipathSet& mp2, const ArrayGeometry& geom,
                            const OfdmConfig& cfg);

// Adds CN(0, P/10^(snr/10)) noise per element, P = mean |h|^2 of the input.
SftTensor add_awgn(const SftTensor& h, std::optional<double> snr_db, std::uint64_t seed);

// Linear noise-to-signal ratio for an SNR in dB; 0 for nullopt/+inf.
double noise_ratio(std::optional<double> snr_db);

}  // namespace tbf
