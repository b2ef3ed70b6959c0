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

#include <Eigen/Dense>

#include "tbf/channel_model.hpp"
#include "tbf/tensor.hpp"

namespace tbf {

// DFT-derived matrices mapping the space/frequency/time axes to angle/delay/Doppler beams.
struct TransformSet {
    Eigen::MatrixXcd w_angle_col;     // M_c x M_c
    Eigen::MatrixXcd w_angle_row;     // M_r x M_r
    Eigen::MatrixXcd w_angle;         // A x A, w_angle_col (x) w_angle_row
    Eigen::MatrixXcd w_delay;         // N_c x N_g
    Eigen::MatrixXcd w_doppler;       // N_t x N_f
    Eigen::MatrixXcd w_delay_full;    // N_c x N_c
    Eigen::MatrixXcd w_doppler_full;  // N_t x N_t; unitary only when N_s == 1
};

struct TbTensor {
    CTensor3 data;  // A x N_g x N_f
};

struct ExtensionPair {
    CTensor3 delay_ext;          // A x N_c x N_f
    CTensor3 delay_doppler_ext;  // A x N_c x N_t
};

// Angle transform for an M-element line: entry (i,j) = exp(-i 2 pi i (2j - M) / (2M)) / sqrt(M).
Eigen::MatrixXcd angle_transform(std::size_t m);
// First `n_cols` columns of the unitary N_c-point DFT.
Eigen::MatrixXcd delay_transform(std::size_t n_subcarriers, std::size_t n_cols);
// Doppler transform with `n_cols` beams over N_t symbols:
// entry (i,j) = exp(i 2 pi (n_T + i/N_s)(2j - n_cols) / (2 n_cols)) / sqrt(N_t).
Eigen::MatrixXcd doppler_transform(std::size_t n_symbols, std::size_t n_cols, std::size_t symbols_per_slot,
                                   std::size_t first_symbol_index);

TransformSet transform_matrices(const ArrayGeometry& geom, const OfdmConfig& cfg);
// Only the matrices the TB projection needs; the square extension matrices are left empty.
TransformSet reduced_transform_matrices(const ArrayGeometry& geom, const OfdmConfig& cfg);

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// [matrix o_mode tensor]: contracts `mode` (0, 1 or 2) of the tensor with the matrix columns.
CTensor3 mode_product(const Eigen::MatrixXcd& matrix, const CTensor3& tensor, std::size_t mode);

// Hermitian projection onto the TB domain with 1/sqrt(M_c M_r N_c N_t) scaling.
TbTensor sft_to_tb(const SftTensor& h, const TransformSet& t);

// Forward reconstruction with sqrt(M_c M_r N_c N_t) scaling; exact inverse for on-grid channels.
SftTensor tb_to_sft(const TbTensor& h, const TransformSet& t);

ExtensionPair extensions(const SftTensor& h, const TransformSet& t);

// Per-path 1-D beam responses. angle = (1/sqrt(A)) W_angle^H f_upa, delay = (1/sqrt(N_c)) W_delay^H f_freq,
// doppler = (1/sqrt(N_t)) W_doppler^H f_time. The TB tensor of a unit-gain path is their outer product.
struct BeamFactors {
    Eigen::VectorXcd angle;    // A
    Eigen::VectorXcd delay;    // N_g (or N_c for the extension)
    Eigen::VectorXcd doppler;  // N_f (or N_t for the extension)
};

BeamFactors beam_factors(const PathTensor& path, const TransformSet& t);
// Same with the square extension matrices (delay over N_c bins, Doppler over N_t bins).
BeamFactors extension_factors(const PathTensor& path, const TransformSet& t);

// Rank-1 fast path: TB tensor of a unit-gain path.
TbTensor path_to_tb(const PathTensor& path, const TransformSet& t);

CTensor3 outer(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXcd& c);

}  // namespace tbf
