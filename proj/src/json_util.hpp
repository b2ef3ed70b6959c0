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
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tbf/errors.hpp"

namespace tbf::detail {

using nlohmann::json;

inline std::string join_path(const std::string& parent, std::string_view key) {
    return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

inline std::string index_path(const std::string& parent, std::size_t i) {
    return parent + "[" + std::to_string(i) + "]";
}

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& what) {
    throw SchemaError((path.empty() ? std::string("<root>") : path) + ": " + what);
}

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) schema_fail(path, "expected an object");
}

inline const json& require_key(const json& obj, std::string_view key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_fail(join_path(path, key), "missing required field");
    return *it;
}

inline double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema_fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema_fail(path, "expected a finite number");
    return v;
}

inline std::uint64_t as_u64(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return std::uint64_t(j.get<std::int64_t>());
    schema_fail(path, "expected a nonnegative integer");
}

inline std::size_t as_count(const json& j, const std::string& path) { return std::size_t(as_u64(j, path)); }

inline bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) schema_fail(path, "expected a boolean");
    return j.get<bool>();
}

inline std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_fail(path, "expected a string");
    return j.get<std::string>();
}

// Copies unrecognized keys into `unknown`, or fails on the first one when `unknown` is null.
inline void check_keys(const json& obj, std::initializer_list<std::string_view> known, const std::string& path,
                       json* unknown) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (auto k : known) ok = ok || (it.key() == k);
        if (ok) continue;
        if (!unknown) schema_fail(join_path(path, it.key()), "unknown field");
        (*unknown)[it.key()] = it.value();
    }
}

// Reads an optional field through `read` when present.
template <class T, class Read>
void read_optional(const json& obj, std::string_view key, const std::string& path, T& target, Read read) {
    auto it = obj.find(key);
    if (it != obj.end()) target = read(*it, join_path(path, key));
}

}  // namespace tbf::detail
