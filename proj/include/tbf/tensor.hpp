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
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tbf/errors.hpp"

namespace tbf {

using cplx = std::complex<double>;

// Dense 3-way tensor, row-major (last index fastest).
template <class T>
class Tensor3 {
public:
    using value_type = T;

    Tensor3() = default;
    Tensor3(std::size_t d0, std::size_t d1, std::size_t d2, T fill = T{})
        : dims_{d0, d1, d2}, data_(d0 * d1 * d2, fill) {}

    std::size_t extent(std::size_t mode) const { return dims_.at(mode); }
    const std::array<std::size_t, 3>& dims() const { return dims_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * dims_[1] + j) * dims_[2] + k;
    }
    T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[offset(i, j, k)]; }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[offset(i, j, k)];
    }

    std::span<T> flat() { return data_; }
    std::span<const T> flat() const { return data_; }
    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    bool same_shape(const Tensor3& other) const { return dims_ == other.dims_; }

    friend bool operator==(const Tensor3&, const Tensor3&) = default;

private:
    std::array<std::size_t, 3> dims_{0, 0, 0};
    std::vector<T> data_;
};

using CTensor3 = Tensor3<cplx>;
using RTensor3 = Tensor3<double>;

inline std::string shape_string(const std::array<std::size_t, 3>& d) {
    return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]);
}

template <class T>
void require_same_shape(const Tensor3<T>& a, const Tensor3<T>& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": shape " + shape_string(a.dims()) + " vs " +
                         shape_string(b.dims()));
    }
}

// Frobenius norm.
double frobenius(const CTensor3& t);
double frobenius(const RTensor3& t);

// Frobenius norm of a - b.
double frobenius_diff(const CTensor3& a, const CTensor3& b);

// Largest |a - b| over all elements.
double max_abs_diff(const CTensor3& a, const CTensor3& b);

// Sum of all elements.
double sum(const RTensor3& t);

}  // namespace tbf
