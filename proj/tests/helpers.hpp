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
#include <filesystem>
#include <string>

#include "tbf/channel_model.hpp"

namespace tbf::test {

inline ArrayGeometry desk_geometry() { return ArrayGeometry::half_wavelength(4, 4, 5.8e9); }

inline OfdmConfig desk_ofdm() { return OfdmConfig{}; }

inline OfdmConfig ofdm(std::size_t nc, std::size_t ng, std::size_t nf, std::size_t ns, std::size_t nt0 = 0) {
    OfdmConfig c;
    c.n_subcarriers = nc;
    c.cp_length = ng;
    c.slots_per_frame = nf;
    c.symbols_per_slot = ns;
    c.first_symbol_index = nt0;
    return c;
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch(const std::string& name) {
    const std::filesystem::path p = std::filesystem::path(TBF_TEST_TMP) / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace tbf::test
