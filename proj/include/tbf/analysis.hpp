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
#include <vector>

#include "tbf/channel_model.hpp"
#include "tbf/fingerprint.hpp"
#include "tbf/random.hpp"

namespace tbf {

// S_L(x) = sin(L pi x) / (L sin(pi x)), continuous at integer x.
double dirichlet(std::size_t length, double x);

// Normalized pseudo-diagonal trace inner product; in [0, 1] for nonnegative inputs.
double collinearity(const RTensor3& a, const RTensor3& b);
double collinearity(const Tbf& a, const Tbf& b);

// Fractional bin offsets below this count as on-grid.
inline constexpr double kOnGridTolerance = 1e-9;

struct PathBins {
    // Real-valued Theorem-1 locations.
    double col = 0.0;      // breve_c
    double row = 0.0;      // breve_r
    double delay = 0.0;    // tau / T_s
    double doppler = 0.0;  // N_t nu T_sym + N_f / 2
    // Nearest-integer bins; angle bins wrap modulo the array size.
    std::size_t col_bin = 0;
    std::size_t row_bin = 0;
    std::size_t angle_bin = 0;  // col_bin * M_r + row_bin
    std::size_t delay_bin = 0;
    std::size_t doppler_bin = 0;
    bool on_grid_angle = false;
    bool on_grid_delay = false;
    bool on_grid_doppler = false;
    double power = 0.0;

    bool on_grid() const { return on_grid_angle && on_grid_delay && on_grid_doppler; }
};

struct Theorem1Prediction {
    std::vector<PathBins> paths;
    std::array<std::size_t, 4> extents{0, 0, 0, 0};  // M_c, M_r, N_g, N_f
};

Theorem1Prediction theorem1_indices(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg);

struct ConcentrationReport {
    std::vector<double> per_path;  // share of the power predicted around each path's bin
    double total = 0.0;            // share of all path power inside the union of predicted windows
};

// `window` is a half-width per TB axis expressed as a fraction of that axis' extent (M_c, M_r, N_g, N_f);
// 0 means the predicted bin only. Throws DegenerateInputError for an all-zero fingerprint.
ConcentrationReport theorem1_check(const Tbf& f, const Theorem1Prediction& pred, double window = 0.0);

struct CollinearityReport {
    double xi_tbf = 0.0;
    double xi_sftf = 0.0;
    double abs_gap = 0.0;
    std::optional<double> xi_sftf_materialized;  // set when the SFTF was formed explicitly
};

enum class SftfRoute { Analytic, Materialized, Both };

CollinearityReport theorem2_check(const MultipathSet& mp1, const MultipathSet& mp2, const ArrayGeometry& geom,
                                  const OfdmConfig& cfg, SftfRoute route = SftfRoute::Analytic,
                                  std::size_t cap = kDefaultSftfCap);

enum class MatrixKind { Identity, Dft, NonUnitary };

// max over modes of |Sum{(O o_n T1) . (O o_n T2)*} - Sum{T1 . T2*}| for random complex T1, T2.
double lemma5_check(std::uint64_t seed, std::array<std::size_t, 3> dims, MatrixKind kind = MatrixKind::Dft);

struct Lemma4Report {
    double delay_deviation = 0.0;       // ||H_dot - I_{Nc x Ng} o_2 H_TB||_F / ||H_dot||_F
    double doppler_deviation = 0.0;     // sampled columns 0, N_s, 2N_s, ... of H_ddot vs H_dot, relative
    double doppler_interstitial = 0.0;  // energy share of H_ddot outside the sampled columns
};

// Evaluates the extensions of the realization with deterministic gains beta_p = sigma_p.
Lemma4Report lemma4_check(const MultipathSet& mp, const ArrayGeometry& geom, const OfdmConfig& cfg);

// |Tr{Y_ddot (x) Y_ddot'*} (M_c M_r N_c N_t)^2 - Tr{X (x) X'*}| / Tr{X (x) X'*}, both from path overlaps.
double trace_identity_deviation(const MultipathSet& mp1, const MultipathSet& mp2, const ArrayGeometry& geom,
                                const OfdmConfig& cfg);

// Path placed at fractional TB coordinates (col, row, delay, doppler), i.e. the inverse of theorem1_indices.
PathParams path_at_bins(double col, double row, double delay, double doppler, double power,
                        const ArrayGeometry& geom, const OfdmConfig& cfg);

enum class SweepAxis { AngleCol, AngleRow, Delay, Doppler };

// A path off the grid by a fixed fractional offset per axis: location = floor(anchor * extent) + offset.
struct OffGridPath {
    std::array<double, 4> anchor{0.5, 0.5, 0.5, 0.5};  // in (0, 1)
    std::array<double, 4> offset{0.0, 0.0, 0.0, 0.0};  // in (-0.5, 0.5)
    double power = 1.0;
};

// Concentrated fraction of a single off-grid path while `axis` doubles `n_doublings` times
// (delay doubles N_c and N_g together, Doppler doubles N_f at fixed N_s). Returns n_doublings + 1 values.
std::vector<double> concentration_sweep(const OffGridPath& path, SweepAxis axis, std::size_t n_doublings,
                                        const ArrayGeometry& geom, const OfdmConfig& cfg, double window);

// Random multipath sets for verification runs. Powers are uniform in [0.1, 1]; angle pairs that no
// direction can reach are redrawn. The on-grid variant draws integer bins, the off-grid one fractional bins.
MultipathSet random_on_grid_set(std::size_t n_paths, const ArrayGeometry& g, const OfdmConfig& cfg, Rng& rng);
MultipathSet random_off_grid_set(std::size_t n_paths, const ArrayGeometry& g, const OfdmConfig& cfg, Rng& rng);

}  // namespace tbf
