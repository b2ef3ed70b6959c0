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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "tbf/channel_model.hpp"
#include "tbf/errors.hpp"
#include "tbf/tensor.hpp"

namespace tbf {

// ---------------------------------------------------------------------------------------------
// Tensor container
//
//   offset  size      field
//   0       4         magic "TBF1"
//   4       1         version (1)
//   5       1         dtype: 0=f32, 1=f64, 2=complex64, 3=complex128 (interleaved re, im)
//   6       1         ndim (>= 1)
//   7       8*ndim    dims, u64 little-endian
//   ...     payload   row-major (last index fastest), little-endian
// ---------------------------------------------------------------------------------------------

enum class DType : std::uint8_t { F32 = 0, F64 = 1, C64 = 2, C128 = 3 };

std::size_t dtype_width(DType d);
std::string to_string(DType d);

inline constexpr std::array<char, 4> kTensorMagic{'T', 'B', 'F', '1'};
inline constexpr std::uint8_t kTensorVersion = 1;

class TensorFormatError : public Error {
public:
    using Error::Error;
};
class BadMagicError : public TensorFormatError {
public:
    using TensorFormatError::TensorFormatError;
};
class UnsupportedVersionError : public TensorFormatError {
public:
    using TensorFormatError::TensorFormatError;
};
class UnsupportedDtypeError : public TensorFormatError {
public:
    using TensorFormatError::TensorFormatError;
};
class TruncatedPayloadError : public TensorFormatError {
public:
    using TensorFormatError::TensorFormatError;
};
class InvalidShapeError : public TensorFormatError {
public:
    using TensorFormatError::TensorFormatError;
};
class TrailingBytesError : public TensorFormatError {
public:
    using TensorFormatError::TensorFormatError;
};
class IoError : public Error {
public:
    using Error::Error;
};

// Payload bytes are kept in file order (little-endian), so equality is bitwise.
struct TensorBlob {
    DType dtype = DType::F64;
    std::vector<std::uint64_t> dims;
    std::vector<std::byte> payload;

    std::size_t element_count() const;
    friend bool operator==(const TensorBlob&, const TensorBlob&) = default;
};

std::vector<std::byte> encode_tensor(const TensorBlob& blob);
TensorBlob decode_tensor(std::span<const std::byte> bytes);

void write_tensor(const std::filesystem::path& path, const TensorBlob& blob);
TensorBlob read_tensor(const std::filesystem::path& path);

// Conversions between numeric containers and blobs.
TensorBlob make_blob(const RTensor3& t, DType dtype = DType::F64);
TensorBlob make_blob(const CTensor3& t, DType dtype = DType::C128);
TensorBlob make_blob(const Eigen::MatrixXd& m, DType dtype = DType::F64);  // rows x cols, row-major payload
TensorBlob make_blob(const Eigen::VectorXd& v, DType dtype = DType::F64);
std::vector<double> blob_real_values(const TensorBlob& blob);  // f32/f64 only
std::vector<cplx> blob_complex_values(const TensorBlob& blob);  // any dtype
RTensor3 blob_to_rtensor(const TensorBlob& blob);               // 3-d real
Eigen::MatrixXd blob_to_matrix(const TensorBlob& blob);         // 2-d real

// ---------------------------------------------------------------------------------------------
// Dataset manifest (JSON). Unknown keys at every level are carried through `extra`.
// ---------------------------------------------------------------------------------------------

inline constexpr int kManifestSchemaVersion = 1;

struct BlobPaths {
    std::string tbf;
    std::string x_ad;
    std::string x_ma;
    std::string x_do;
    nlohmann::json extra = nlohmann::json::object();
};

struct ManifestRecord {
    std::uint64_t id = 0;
    std::array<double, 3> position_m{0.0, 0.0, 0.0};
    std::size_t direction_class = 0;
    double heading_rad = 0.0;
    double speed_mps = 0.0;
    std::optional<double> snr_db;  // null = noiseless
    BlobPaths blobs;
    nlohmann::json extra = nlohmann::json::object();
};

struct Manifest {
    int schema_version = kManifestSchemaVersion;
    ArrayGeometry geometry;
    OfdmConfig ofdm;
    std::uint64_t scene_seed = 0;
    std::vector<ManifestRecord> records;
    nlohmann::json geometry_extra = nlohmann::json::object();
    nlohmann::json ofdm_extra = nlohmann::json::object();
    nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j);  // SchemaError names the offending field path

void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

// Checks every referenced blob exists, parses, and has the shape implied by geometry/ofdm.
// Blob paths are resolved relative to `base_dir`. Throws SchemaError naming the path.
void validate_manifest(const Manifest& m, const std::filesystem::path& base_dir);

}  // namespace tbf
