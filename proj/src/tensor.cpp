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

#include "tbf/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace tbf {

double frobenius(const CTensor3& t) {
    double s = 0.0;
    for (const cplx& v : t.flat()) s += std::norm(v);
    return std::sqrt(s);
}

double frobenius(const RTensor3& t) {
    double s = 0.0;
    for (double v : t.flat()) s += v * v;
    return std::sqrt(s);
}

double frobenius_diff(const CTensor3& a, const CTensor3& b) {
    require_same_shape(a, b, "frobenius_diff");
    double s = 0.0;
    auto fa = a.flat();
    auto fb = b.flat();
    for (std::size_t i = 0; i < fa.size(); ++i) s += std::norm(fa[i] - fb[i]);
    return std::sqrt(s);
}

double max_abs_diff(const CTensor3& a, const CTensor3& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    auto fa = a.flat();
    auto fb = b.flat();
    for (std::size_t i = 0; i < fa.size(); ++i) m = std::max(m, std::abs(fa[i] - fb[i]));
    return m;
}

double sum(const RTensor3& t) {
    double s = 0.0;
    for (double v : t.flat()) s += v;
    return s;
}

}  // namespace tbf
