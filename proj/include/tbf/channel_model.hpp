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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tbf/tensor.hpp"

namespace tbf {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// Uniform planar array at the base station, placed in the X-Z plane.
struct ArrayGeometry {
    std::size_t m_rows = 4;      // antennas per row
    std::size_t m_cols = 4;      // antennas per column
    double d_row = 0.0;          // spacing between adjacent antennas in a row [m]
    double d_col = 0.0;          // spacing between adjacent antennas in a column [m]
    double wavelength = 0.0;     // carrier wavelength [m]

    std::size_t antennas() const { return m_rows * m_cols; }
    void validate() const;

    // Half-wavelength array at the given carrier frequency.
    static ArrayGeometry half_wavelength(std::size_t m_rows, std::size_t m_cols, double carrier_hz);
};

struct OfdmConfig {
    std::size_t n_subcarriers = 256;    // N_c
    std::size_t cp_length = 18;         // N_g
    double subcarrier_spacing = 120e3;  // Hz
    std::size_t slots_per_frame = 8;    // N_f
    std::size_t symbols_per_slot = 2;   // N_s
    std::size_t first_symbol_index = 0; // n_T

    double sample_interval() const { return 1.0 / (double(n_subcarriers) * subcarrier_spacing); }
    double symbol_duration() const { return double(n_subcarriers + cp_length) * sample_interval(); }
    std::size_t symbols_per_frame() const { return slots_per_frame * symbols_per_slot; }
    double max_delay() const { return double(cp_length) * sample_interval(); }
    // Doppler grid spacing 1/(N_t T_sym).
    double doppler_resolution() const { return 1.0 / (double(symbols_per_frame()) * symbol_duration()); }
    double min_doppler() const { return -0.5 * double(slots_per_frame) * doppler_resolution(); }
    double max_doppler() const {
        return (double(slots_per_frame) - 1.0 - 0.5 * double(slots_per_frame)) * doppler_resolution();
    }
    void validate() const;
};

struct PathParams {
    double gain_variance = 1.0;  // sigma^2
    double elevation = kPi / 2;  // theta in [0, pi]
    double azimuth = kPi / 2;    // phi in [0, pi]
    double delay = 0.0;          // tau [s], 0 <= tau < N_g T_s
    double doppler = 0.0;        // nu [Hz]
};

struct MultipathSet {
    std::vector<PathParams> paths;
    std::uint64_t id = 0;

    std::size_t size() const { return paths.size(); }
    double total_power() const;
};

// Throws RangeError/ParameterError when a path breaks the model's admissible ranges.
void validate_path(const PathParams& path, const OfdmConfig& cfg);
void validate_multipath(const MultipathSet& mp, const OfdmConfig& cfg);

struct SteeringSet {
    Eigen::VectorXcd f_col;   // M_c
    Eigen::VectorXcd f_row;   // M_r
    Eigen::VectorXcd f_upa;   // A = f_col (x) f_row
    Eigen::VectorXcd f_freq;  // N_c
    Eigen::VectorXcd f_time;  // N_t
};

SteeringSet steering_vectors(const PathParams& path, const ArrayGeometry& geom, const OfdmConfig& cfg);

struct SftTensor {
    CTensor3 data;  // A x N_c x N_t
};

// Default materialization cap for rank-1 and SFT tensors (complex entries).
inline constexpr std::size_t kDefaultMaterializeCap = std::size_t{1} << 25;

// Unit-gain rank-1 channel of a single path, kept as its three factors.
class PathTensor {
public:
    PathTensor(Eigen::VectorXcd space, Eigen::VectorXcd freq, Eigen::VectorXcd time);

    const Eigen::VectorXcd& space() const { return space_; }
    const Eigen::VectorXcd& freq() const { return freq_; }
    const Eigen::VectorXcd& time() const { return time_; }

    cplx operator()(std::size_t a, std::size_t c, std::size_t n) const {
        return space_[Eigen::Index(a)] * freq_[Eigen::Index(c)] * time_[Eigen::Index(n)];
    }
    std::size_t element_count() const {
        return std::size_t(space_.size()) * std::size_t(freq_.size()) * std::size_t(time_.size());
    }
    // Throws SizeError when element_count() exceeds the cap.
    SftTensor materialize(std::size_t cap = kDefaultMaterializeCap) const;

private:
    Eigen::VectorXcd space_;
    Eigen::VectorXcd freq_;
    Eigen::VectorXcd time_;
};

PathTensor path_tensor(const PathParams& path, const ArrayGeometry& geom, const OfdmConfig& cfg);

// n_draws x P matrix of i.i.d. CN(0, variance[p]) gains; row d depends only on (seed, d).
Eigen::MatrixXcd draw_gains(std::span<const double> variances, std::uint64_t seed, std::size_t n_draws);

SftTensor assemble_sft(const MultipathSet& mp, std::span<const cplx> gains, const ArrayGeometry& geom,
                       const OfdmConfig& cfg, std::size_t cap = kDefaultMaterializeCap);

}  // namespace tbf
