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

#include "tbf/store.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "json_util.hpp"
#include "tbf/config.hpp"

namespace tbf {

using detail::json;
using detail::schema_fail;

std::size_t dtype_width(DType d) {
    switch (d) {
        case DType::F32: return 4;
        case DType::F64: return 8;
        case DType::C64: return 8;
        case DType::C128: return 16;
    }
    throw UnsupportedDtypeError("unknown dtype");
}

std::string to_string(DType d) {
    switch (d) {
        case DType::F32: return "f32";
        case DType::F64: return "f64";
        case DType::C64: return "c64";
        case DType::C128: return "c128";
    }
    return "unknown";
}

std::size_t TensorBlob::element_count() const {
    std::size_t n = 1;
    for (auto d : dims) n *= std::size_t(d);
    return n;
}

namespace {

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(const std::byte* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::to_integer<std::uint8_t>(p[i])) << (8 * i);
    return v;
}

void put_f32(std::vector<std::byte>& out, float f) {
    const auto v = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) out.push_back(std::byte((v >> (8 * i)) & 0xFF));
}

void put_f64(std::vector<std::byte>& out, double d) { put_u64(out, std::bit_cast<std::uint64_t>(d)); }

float get_f32(const std::byte* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::to_integer<std::uint8_t>(p[i])) << (8 * i);
    return std::bit_cast<float>(v);
}

double get_f64(const std::byte* p) { return std::bit_cast<double>(get_u64(p)); }

void put_value(std::vector<std::byte>& out, DType dtype, cplx v) {
    switch (dtype) {
        case DType::F32: put_f32(out, float(v.real())); break;
        case DType::F64: put_f64(out, v.real()); break;
        case DType::C64:
            put_f32(out, float(v.real()));
            put_f32(out, float(v.imag()));
            break;
        case DType::C128:
            put_f64(out, v.real());
            put_f64(out, v.imag());
            break;
    }
}

TensorBlob blob_from_values(DType dtype, std::vector<std::uint64_t> dims, const auto& values) {
    TensorBlob b;
    b.dtype = dtype;
    b.dims = std::move(dims);
    b.payload.reserve(b.element_count() * dtype_width(dtype));
    for (const auto& v : values) put_value(b.payload, dtype, cplx(v));
    return b;
}

bool is_real(DType d) { return d == DType::F32 || d == DType::F64; }

}  // namespace

std::vector<std::byte> encode_tensor(const TensorBlob& blob) {
    if (blob.dims.empty()) throw InvalidShapeError("tensor needs ndim >= 1");
    if (blob.dims.size() > 255) throw InvalidShapeError("tensor rank exceeds 255");
    const std::size_t expected = blob.element_count() * dtype_width(blob.dtype);
    if (blob.payload.size() != expected) {
        throw InvalidShapeError("payload has " + std::to_string(blob.payload.size()) + " bytes, shape needs " +
                                std::to_string(expected));
    }
    std::vector<std::byte> out;
    out.reserve(7 + 8 * blob.dims.size() + blob.payload.size());
    for (char c : kTensorMagic) out.push_back(std::byte(c));
    out.push_back(std::byte(kTensorVersion));
    out.push_back(std::byte(blob.dtype));
    out.push_back(std::byte(blob.dims.size()));
    for (auto d : blob.dims) put_u64(out, d);
    out.insert(out.end(), blob.payload.begin(), blob.payload.end());
    return out;
}

TensorBlob decode_tensor(std::span<const std::byte> bytes) {
    const std::size_t magic_len = std::min<std::size_t>(bytes.size(), 4);
    for (std::size_t i = 0; i < magic_len; ++i)
        if (std::to_integer<char>(bytes[i]) != kTensorMagic[i]) throw BadMagicError("bad magic: not a TBF1 tensor");
    if (bytes.size() < 7) throw TruncatedPayloadError("header truncated");
    const auto version = std::to_integer<std::uint8_t>(bytes[4]);
    if (version != kTensorVersion) throw UnsupportedVersionError("unsupported version " + std::to_string(version));
    const auto dtype = std::to_integer<std::uint8_t>(bytes[5]);
    if (dtype > 3) throw UnsupportedDtypeError("unsupported dtype " + std::to_string(dtype));
    const auto ndim = std::to_integer<std::uint8_t>(bytes[6]);
    if (ndim == 0) throw InvalidShapeError("ndim must be >= 1");
    const std::size_t header = 7 + 8 * std::size_t(ndim);
    if (bytes.size() < header) throw TruncatedPayloadError("dimension table truncated");

    TensorBlob b;
    b.dtype = DType(dtype);
    std::size_t count = 1;
    for (std::size_t i = 0; i < ndim; ++i) {
        const std::uint64_t d = get_u64(bytes.data() + 7 + 8 * i);
        if (d != 0 && count > std::numeric_limits<std::size_t>::max() / 16 / d)
            throw InvalidShapeError("dimensions overflow");
        count *= std::size_t(d);
        b.dims.push_back(d);
    }
    const std::size_t need = count * dtype_width(b.dtype);
    const std::size_t have = bytes.size() - header;
    if (have < need) {
        throw TruncatedPayloadError("payload truncated: " + std::to_string(have) + " of " + std::to_string(need) +
                                    " bytes");
    }
    if (have > need) throw TrailingBytesError(std::to_string(have - need) + " trailing bytes after payload");
    b.payload.assign(bytes.begin() + std::ptrdiff_t(header), bytes.end());
    return b;
}

void write_tensor(const std::filesystem::path& path, const TensorBlob& blob) {
    const std::vector<std::byte> bytes = encode_tensor(blob);
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

TensorBlob read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<std::byte> bytes(raw.size());
    if (!raw.empty()) std::memcpy(bytes.data(), raw.data(), raw.size());
    return decode_tensor(bytes);
}

TensorBlob make_blob(const RTensor3& t, DType dtype) {
    const auto d = t.dims();
    return blob_from_values(dtype, {d[0], d[1], d[2]}, t.flat());
}

TensorBlob make_blob(const CTensor3& t, DType dtype) {
    if (is_real(dtype)) throw UnsupportedDtypeError("complex tensor needs a complex dtype");
    const auto d = t.dims();
    return blob_from_values(dtype, {d[0], d[1], d[2]}, t.flat());
}

TensorBlob make_blob(const Eigen::MatrixXd& m, DType dtype) {
    std::vector<double> v;
    v.reserve(std::size_t(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return blob_from_values(dtype, {std::uint64_t(m.rows()), std::uint64_t(m.cols())}, v);
}

TensorBlob make_blob(const Eigen::VectorXd& v, DType dtype) {
    std::vector<double> vals(v.data(), v.data() + v.size());
    return blob_from_values(dtype, {std::uint64_t(v.size())}, vals);
}

std::vector<cplx> blob_complex_values(const TensorBlob& blob) {
    const std::size_t n = blob.element_count();
    const std::size_t w = dtype_width(blob.dtype);
    if (blob.payload.size() != n * w) throw InvalidShapeError("payload length does not match the shape");
    std::vector<cplx> out(n);
    const std::byte* p = blob.payload.data();
    for (std::size_t i = 0; i < n; ++i, p += w) {
        switch (blob.dtype) {
            case DType::F32: out[i] = get_f32(p); break;
            case DType::F64: out[i] = get_f64(p); break;
            case DType::C64: out[i] = cplx(get_f32(p), get_f32(p + 4)); break;
            case DType::C128: out[i] = cplx(get_f64(p), get_f64(p + 8)); break;
        }
    }
    return out;
}

std::vector<double> blob_real_values(const TensorBlob& blob) {
    if (!is_real(blob.dtype)) throw UnsupportedDtypeError("expected a real dtype, got " + to_string(blob.dtype));
    std::vector<double> out;
    for (const cplx& v : blob_complex_values(blob)) out.push_back(v.real());
    return out;
}

RTensor3 blob_to_rtensor(const TensorBlob& blob) {
    if (blob.dims.size() != 3) throw InvalidShapeError("expected a 3-d tensor");
    RTensor3 t(blob.dims[0], blob.dims[1], blob.dims[2]);
    const auto v = blob_real_values(blob);
    std::copy(v.begin(), v.end(), t.flat().begin());
    return t;
}

Eigen::MatrixXd blob_to_matrix(const TensorBlob& blob) {
    if (blob.dims.size() != 2) throw InvalidShapeError("expected a 2-d tensor");
    const auto v = blob_real_values(blob);
    Eigen::MatrixXd m(Eigen::Index(blob.dims[0]), Eigen::Index(blob.dims[1]));
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = v[k++];
    return m;
}

// ---------------------------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------------------------

namespace {

constexpr const char* kBlobKeys[] = {"tbf", "x_ad", "x_ma", "x_do"};

std::string& blob_field(BlobPaths& b, std::size_t i) {
    switch (i) {
        case 0: return b.tbf;
        case 1: return b.x_ad;
        case 2: return b.x_ma;
        default: return b.x_do;
    }
}

const std::string& blob_field(const BlobPaths& b, std::size_t i) {
    return blob_field(const_cast<BlobPaths&>(b), i);
}

ManifestRecord record_from_json(const json& j, const std::string& path) {
    using namespace detail;
    require_object(j, path);
    ManifestRecord r;
    check_keys(j, {"id", "position_m", "direction_class", "heading_rad", "speed_mps", "snr_db", "blobs"}, path,
               &r.extra);
    r.id = as_u64(require_key(j, "id", path), join_path(path, "id"));
    const json& pos = require_key(j, "position_m", path);
    const std::string pos_path = join_path(path, "position_m");
    if (!pos.is_array() || pos.size() != 3) schema_fail(pos_path, "expected an array of 3 numbers");
    for (std::size_t i = 0; i < 3; ++i) r.position_m[i] = as_number(pos[i], index_path(pos_path, i));
    r.direction_class = as_count(require_key(j, "direction_class", path), join_path(path, "direction_class"));
    if (r.direction_class >= kDirectionClasses) schema_fail(join_path(path, "direction_class"), "must be < 16");
    r.heading_rad = as_number(require_key(j, "heading_rad", path), join_path(path, "heading_rad"));
    r.speed_mps = as_number(require_key(j, "speed_mps", path), join_path(path, "speed_mps"));
    const json& snr = require_key(j, "snr_db", path);
    if (!snr.is_null()) r.snr_db = as_number(snr, join_path(path, "snr_db"));

    const json& blobs = require_key(j, "blobs", path);
    const std::string bpath = join_path(path, "blobs");
    require_object(blobs, bpath);
    check_keys(blobs, {"tbf", "x_ad", "x_ma", "x_do"}, bpath, &r.blobs.extra);
    for (std::size_t i = 0; i < 4; ++i)
        blob_field(r.blobs, i) = as_string(require_key(blobs, kBlobKeys[i], bpath), join_path(bpath, kBlobKeys[i]));
    return r;
}

json record_to_json(const ManifestRecord& r) {
    json j = r.extra;
    j["id"] = r.id;
    j["position_m"] = {r.position_m[0], r.position_m[1], r.position_m[2]};
    j["direction_class"] = r.direction_class;
    j["heading_rad"] = r.heading_rad;
    j["speed_mps"] = r.speed_mps;
    j["snr_db"] = r.snr_db ? json(*r.snr_db) : json(nullptr);
    json b = r.blobs.extra;
    for (std::size_t i = 0; i < 4; ++i) b[kBlobKeys[i]] = blob_field(r.blobs, i);
    j["blobs"] = b;
    return j;
}

}  // namespace

json manifest_to_json(const Manifest& m) {
    json j = m.extra;
    j["schema_version"] = m.schema_version;
    json g = m.geometry_extra;
    g.update(geometry_to_json(m.geometry));
    j["geometry"] = g;
    json o = m.ofdm_extra;
    o.update(ofdm_to_json(m.ofdm));
    j["ofdm"] = o;
    j["scene_seed"] = m.scene_seed;
    json recs = json::array();
    for (const auto& r : m.records) recs.push_back(record_to_json(r));
    j["records"] = recs;
    return j;
}

Manifest manifest_from_json(const json& j) {
    using namespace detail;
    require_object(j, "");
    Manifest m;
    check_keys(j, {"schema_version", "geometry", "ofdm", "scene_seed", "records"}, "", &m.extra);
    const json& ver = require_key(j, "schema_version", "");
    if (!ver.is_number_integer() || ver.get<std::int64_t>() != kManifestSchemaVersion)
        schema_fail("schema_version", "expected " + std::to_string(kManifestSchemaVersion));
    m.schema_version = kManifestSchemaVersion;
    m.geometry = geometry_from_json(require_key(j, "geometry", ""), "geometry", &m.geometry_extra);
    m.ofdm = ofdm_from_json(require_key(j, "ofdm", ""), "ofdm", &m.ofdm_extra);
    m.scene_seed = as_u64(require_key(j, "scene_seed", ""), "scene_seed");
    const json& recs = require_key(j, "records", "");
    if (!recs.is_array()) schema_fail("records", "expected an array");
    for (std::size_t i = 0; i < recs.size(); ++i) m.records.push_back(record_from_json(recs[i], index_path("records", i)));
    return m;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
    std::filesystem::path tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << manifest_to_json(m).dump(2) << '\n';
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": invalid JSON: " + e.what());
    }
    return manifest_from_json(j);
}

void validate_manifest(const Manifest& m, const std::filesystem::path& base_dir) {
    const std::uint64_t a = m.geometry.antennas();
    const std::uint64_t g = m.ofdm.cp_length;
    const std::uint64_t f = m.ofdm.slots_per_frame;
    const std::vector<std::uint64_t> shapes[4] = {{a, g, f}, {a, g}, {a, g}, {f}};
    for (std::size_t i = 0; i < m.records.size(); ++i) {
        const std::string rpath = detail::index_path("records", i) + ".blobs";
        for (std::size_t b = 0; b < 4; ++b) {
            const std::string field = detail::join_path(rpath, kBlobKeys[b]);
            const std::string& rel = blob_field(m.records[i].blobs, b);
            const std::filesystem::path p = base_dir / rel;
            if (!std::filesystem::is_regular_file(p)) schema_fail(field, "missing blob '" + p.string() + "'");
            TensorBlob blob;
            try {
                blob = read_tensor(p);
            } catch (const Error& e) {
                schema_fail(field, "blob '" + p.string() + "' does not parse: " + e.what());
            }
            if (!is_real(blob.dtype)) schema_fail(field, "blob '" + p.string() + "' must hold real values");
            if (blob.dims != shapes[b]) schema_fail(field, "blob '" + p.string() + "' has a shape that does not match the manifest");
        }
    }
}

}  // namespace tbf
