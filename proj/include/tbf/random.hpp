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

#include <cmath>
#include <cstdint>
#include <random>

#include "tbf/tensor.hpp"

namespace tbf {

// SplitMix64 finalizer; used to derive independent stream seeds from (seed, counter).
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based stream seed: the draw for (seed, stream, index) never depends on how
// the work is chunked.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    return mix64(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL)) + index);
}

using Rng = std::mt19937_64;

// Circularly symmetric complex Gaussian CN(0, variance).
inline cplx complex_normal(Rng& rng, double variance) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const double s = std::sqrt(variance / 2.0);
    const double re = nd(rng);
    const double im = nd(rng);
    return {s * re, s * im};
}

// Stream identifiers for derive_seed.
namespace streams {
inline constexpr std::uint64_t gains = 1;
inline constexpr std::uint64_t noise = 2;
inline constexpr std::uint64_t scene = 3;
inline constexpr std::uint64_t record = 4;
inline constexpr std::uint64_t heading = 5;
inline constexpr std::uint64_t query = 6;
inline constexpr std::uint64_t verify = 7;
}  // namespace streams

}  // namespace tbf
