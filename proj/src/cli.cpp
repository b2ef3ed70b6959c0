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

#include "tbf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tbf/analysis.hpp"
#include "tbf/baseline.hpp"
#include "tbf/config.hpp"
#include "tbf/dataset.hpp"
#include "tbf/random.hpp"
#include "tbf/store.hpp"

namespace tbf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown when a verification threshold is missed; maps to exit code 2.
class ThresholdFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string config;
    std::uint64_t seed = 0;
    std::string out;
    std::string snr_db;
    std::vector<double> gamma;
    std::size_t k = kDefaultK;
    bool snap = false;
    std::string db;
    std::string queries;
    std::string dtype = "f32";
    std::size_t threads = 0;

    const CLI::App* leaf = nullptr;  // the subcommand that was invoked

    bool given(const std::string& name) const { return leaf && leaf->count(name) > 0; }
};

std::optional<double> parse_snr(const std::string& s) {
    if (s == "none" || s == "inf" || s == "null") return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("--snr-db expects a number or 'none', got '" + s + "'");
    }
}

EngineConfig resolve_config(const Flags& f) {
    EngineConfig c = f.config.empty() ? EngineConfig{} : load_config(f.config);
    if (f.given("--seed")) {
        c.seed = f.seed;
        c.scene.seed = f.seed;
    }
    if (f.given("--snr-db")) c.dataset.snr_db = parse_snr(f.snr_db);
    if (f.given("--gamma") && !f.gamma.empty()) c.dataset.gamma = f.gamma.front();
    if (f.given("--k")) c.wknn.k = f.k;
    if (f.given("--threads")) c.dataset.threads = f.threads;
    if (f.snap) c.dataset.snap_to_grid = true;
    c.validate();
    return c;
}

DatasetOptions dataset_options(const EngineConfig& c) {
    DatasetOptions o;
    o.seed = c.seed;
    o.n_draws = c.dataset.n_draws;
    o.gamma = c.dataset.gamma;
    o.speed = c.dataset.speed;
    o.snap_to_grid = c.dataset.snap_to_grid;
    o.threads = c.dataset.threads;
    return o;
}

fs::path require_out(const Flags& f) {
    if (f.out.empty()) throw ParameterError("--out <dir> is required for this command");
    fs::create_directories(f.out);
    return fs::path(f.out);
}

std::ofstream open_csv(const fs::path& p) {
    std::ofstream o(p, std::ios::trunc);
    if (!o) throw IoError("cannot open " + p.string());
    o << std::setprecision(17);
    return o;
}

json snr_json(const std::optional<double>& s) { return s ? json(*s) : json(nullptr); }

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// The single UT the inspection commands look at.
UtState probe_state(const EngineConfig& c) {
    return random_states(1, c.scene.extent, c.dataset.floors, c.dataset.speed,
                         derive_seed(c.seed, streams::verify, 1))
        .front();
}

// ---------------------------------------------------------------------------------------------

int cmd_scene_gen(const Flags& f, std::ostream& out) {
    const EngineConfig c = resolve_config(f);
    const Scene s = build_scene(c.scene);
    json scat = json::array();
    for (const Vec3& p : s.scatterers) scat.push_back({p.x(), p.y(), p.z()});
    const UtState ut = probe_state(c);
    const MultipathResult mr = multipath_for(s, ut, c.geometry, c.ofdm);
    json paths = json::array();
    for (const auto& p : mr.set.paths) {
        paths.push_back({{"gain_variance", p.gain_variance},
                         {"elevation_rad", p.elevation},
                         {"azimuth_rad", p.azimuth},
                         {"delay_s", p.delay},
                         {"doppler_hz", p.doppler}});
    }
    json doc{{"seed", s.seed},
             {"bs_position", {s.bs_position.x(), s.bs_position.y(), s.bs_position.z()}},
             {"extent", s.extent},
             {"path_loss_exponent", s.path_loss_exponent},
             {"include_los", s.include_los},
             {"scatterers", scat},
             {"probe",
              {{"position_m", {ut.position.x(), ut.position.y(), ut.position.z()}},
               {"heading_rad", ut.heading},
               {"speed_mps", ut.speed},
               {"paths", paths},
               {"dropped", mr.dropped}}}};
    if (!f.out.empty()) {
        std::ofstream o(require_out(f) / "scene.json");
        o << doc.dump(2) << '\n';
    }
    emit(out, json{{"command", "scene gen"},
                   {"scatterers", s.scatterers.size()},
                   {"probe_paths", mr.set.size()},
                   {"probe_dropped", mr.dropped}});
    return kExitOk;
}

// Writes the records of `states` as blobs + manifest under `dir`, streaming in chunks.
Manifest write_dataset(const EngineConfig& c, const Scene& scene, const std::vector<UtState>& states,
                       const fs::path& dir, DType dtype) {
    fs::create_directories(dir / "blobs");
    Manifest m;
    m.geometry = c.geometry;
    m.ofdm = c.ofdm;
    m.scene_seed = c.scene.seed;
    m.extra["generator"] = {{"heading_policy", to_string(c.dataset.heading_policy)},
                            {"grid_spacing", c.dataset.grid_spacing},
                            {"gamma", c.dataset.gamma},
                            {"n_draws", c.dataset.n_draws},
                            {"snap_to_grid", c.dataset.snap_to_grid},
                            {"dtype", to_string(dtype)},
                            {"seed", c.seed}};
    const DatasetOptions opt = dataset_options(c);
    constexpr std::size_t kChunk = 256;
    for (std::size_t first = 0; first < states.size(); first += kChunk) {
        const std::size_t last = std::min(states.size(), first + kChunk);
        const std::vector<UtState> chunk(states.begin() + std::ptrdiff_t(first), states.begin() + std::ptrdiff_t(last));
        const auto records = build_records(scene, chunk, c.dataset.snr_db, c.geometry, c.ofdm, opt, first);
        for (const auto& r : records) {
            std::ostringstream stem;
            stem << std::setw(6) << std::setfill('0') << r.id;
            ManifestRecord mr;
            mr.id = r.id;
            mr.position_m = {r.ut.position.x(), r.ut.position.y(), r.ut.position.z()};
            mr.direction_class = r.direction_class;
            mr.heading_rad = r.ut.heading;
            mr.speed_mps = r.ut.speed;
            mr.snr_db = r.snr_db;
            mr.blobs.tbf = "blobs/" + stem.str() + "_tbf.bin";
            mr.blobs.x_ad = "blobs/" + stem.str() + "_x_ad.bin";
            mr.blobs.x_ma = "blobs/" + stem.str() + "_x_ma.bin";
            mr.blobs.x_do = "blobs/" + stem.str() + "_x_do.bin";
            write_tensor(dir / mr.blobs.tbf, make_blob(r.tbf.data, dtype));
            write_tensor(dir / mr.blobs.x_ad, make_blob(r.inputs.x_ad, dtype));
            write_tensor(dir / mr.blobs.x_ma, make_blob(Eigen::MatrixXd(r.inputs.x_ma.cast<double>()), dtype));
            write_tensor(dir / mr.blobs.x_do, make_blob(r.inputs.x_do, dtype));
            m.records.push_back(std::move(mr));
        }
    }
    write_manifest(dir / "manifest.json", m);
    return m;
}

std::vector<UtState> grid_states(const EngineConfig& c) {
    return tbf::grid_states(GridSpec{c.dataset.grid_spacing, c.dataset.floors}, c.scene.extent,
                            c.dataset.heading_policy, c.dataset.speed, c.seed);
}

int cmd_dataset_build(const Flags& f, std::ostream& out, bool export_mode) {
    const EngineConfig c = resolve_config(f);
    const fs::path dir = require_out(f);
    DType dtype = DType::F64;
    if (export_mode) {
        if (f.dtype == "f32") {
            dtype = DType::F32;
        } else if (f.dtype != "f64") {
            throw ParameterError("--dtype must be f32 or f64");
        }
    }
    const Scene scene = build_scene(c.scene);
    const Manifest m = write_dataset(c, scene, grid_states(c), dir, dtype);
    json summary{{"command", export_mode ? "export" : "dataset build"},
                 {"records", m.records.size()},
                 {"manifest", "manifest.json"},
                 {"dtype", to_string(dtype)}};
    if (export_mode) {
        // Round-trip check: the manifest re-reads identically and every blob validates.
        const Manifest back = read_manifest(dir / "manifest.json");
        validate_manifest(back, dir);
        if (manifest_to_json(back) != manifest_to_json(m)) throw SchemaError("manifest does not round-trip");
        summary["validated"] = true;
    }
    emit(out, summary);
    return kExitOk;
}

int cmd_verify_theorem1(const Flags& f, std::ostream& out) {
    const EngineConfig c = resolve_config(f);
    const Scene scene = build_scene(c.scene);
    MultipathSet mp = multipath_for(scene, probe_state(c), c.geometry, c.ofdm).set;
    if (c.dataset.snap_to_grid) mp = snap_to_grid(mp, c.geometry, c.ofdm);
    const Tbf fp = tbf_exact(mp, c.geometry, c.ofdm);
    const Theorem1Prediction pred = theorem1_indices(mp, c.geometry, c.ofdm);
    const ConcentrationReport rep = theorem1_check(fp, pred);
    constexpr double kTol = 1e-9;
    bool all_on_grid = true;
    bool pass = true;
    out << std::setprecision(17);
    out << "theorem1 paths=" << mp.size() << " snap_to_grid=" << (c.dataset.snap_to_grid ? 1 : 0) << '\n';
    for (std::size_t p = 0; p < pred.paths.size(); ++p) {
        const PathBins& b = pred.paths[p];
        all_on_grid = all_on_grid && b.on_grid();
        out << "path=" << p << " angle_bin=" << b.angle_bin << " delay_bin=" << b.delay_bin
            << " doppler_bin=" << b.doppler_bin << " on_grid=" << (b.on_grid() ? 1 : 0)
            << " fraction=" << rep.per_path[p] << '\n';
        if (b.on_grid() && rep.per_path[p] < 1.0 - kTol) pass = false;
    }
    out << "total=" << rep.total << '\n';
    if (all_on_grid && rep.total < 1.0 - kTol) pass = false;
    out << "result=" << (pass ? "PASS" : "FAIL") << '\n';
    if (!pass) throw ThresholdFailure("on-grid concentration below 1 - 1e-9");
    return kExitOk;
}

int cmd_verify_theorem2(const Flags& f, std::ostream& out) {
    const EngineConfig c = resolve_config(f);
    ArrayGeometry g = ArrayGeometry::half_wavelength(2, 2, kDefaultCarrierHz);
    OfdmConfig cfg;
    cfg.n_subcarriers = 8;
    cfg.cp_length = 4;
    cfg.slots_per_frame = 4;
    cfg.symbols_per_slot = 2;
    constexpr std::size_t kSeeds = 100;
    constexpr double kGapTol = 0.05;
    constexpr double kRouteTol = 1e-8;
    double worst_gap = 0.0, worst_route = 0.0;
    std::ostringstream csv;
    csv << std::setprecision(17) << "seed,xi_tbf,xi_sftf,xi_sftf_materialized,abs_gap\n";
    for (std::size_t s = 0; s < kSeeds; ++s) {
        Rng rng(derive_seed(c.seed, streams::verify, 200 + s));
        const MultipathSet a = random_on_grid_set(3, g, cfg, rng);
        const MultipathSet b = random_on_grid_set(3, g, cfg, rng);
        const CollinearityReport r = theorem2_check(a, b, g, cfg, SftfRoute::Both);
        // Both routes share the normalization, so this is the trace mismatch relative to ||X1|| ||X2||.
        const double route = std::fabs(*r.xi_sftf_materialized - r.xi_sftf);
        worst_gap = std::max(worst_gap, r.abs_gap);
        worst_route = std::max(worst_route, route);
        csv << s << ',' << r.xi_tbf << ',' << r.xi_sftf << ',' << *r.xi_sftf_materialized << ',' << r.abs_gap << '\n';
    }
    if (!f.out.empty()) open_csv(require_out(f) / "theorem2.csv") << csv.str();
    const bool pass = worst_gap <= kGapTol && worst_route <= kRouteTol;
    out << std::setprecision(17) << "theorem2 seeds=" << kSeeds << '\n'
        << "max_abs_gap=" << worst_gap << '\n'
        << "max_route_diff=" << worst_route << '\n'
        << "result=" << (pass ? "PASS" : "FAIL") << '\n';
    if (!pass) throw ThresholdFailure("theorem 2 gap or route mismatch above tolerance");
    return kExitOk;
}

int cmd_verify_lemmas(const Flags& f, std::ostream& out) {
    const EngineConfig c = resolve_config(f);
    out << std::setprecision(17);
    bool pass = true;

    double l5 = 0.0, l5_control = std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 0; s < 50; ++s) {
        l5 = std::max(l5, lemma5_check(c.seed + s, {4, 4, 4}, MatrixKind::Dft));
        l5_control = std::min(l5_control, lemma5_check(c.seed + s, {4, 4, 4}, MatrixKind::NonUnitary));
    }
    const bool l5_ok = l5 <= 1e-10 && l5_control > 1e-3;
    out << "lemma5 max_deviation=" << l5 << " min_nonunitary_deviation=" << l5_control
        << " result=" << (l5_ok ? "PASS" : "FAIL") << '\n';
    pass = pass && l5_ok;

    // On-grid extension check at the configured dimensions.
    Rng rng(derive_seed(c.seed, streams::verify, 4));
    const MultipathSet on = random_on_grid_set(3, c.geometry, c.ofdm, rng);
    const Lemma4Report l4 = lemma4_check(on, c.geometry, c.ofdm);
    const bool l4_ok = l4.delay_deviation <= 1e-9 && l4.doppler_deviation <= 1e-9;
    out << "lemma4_on_grid delay_deviation=" << l4.delay_deviation << " doppler_deviation=" << l4.doppler_deviation
        << " doppler_interstitial=" << l4.doppler_interstitial << " result=" << (l4_ok ? "PASS" : "FAIL") << '\n';
    pass = pass && l4_ok;

    // Off-grid delay deviation over growing N_c with N_g = N_c / 8.
    std::vector<double> dev;
    for (std::size_t nc : {256u, 512u, 1024u}) {
        OfdmConfig cfg = c.ofdm;
        cfg.n_subcarriers = nc;
        cfg.cp_length = nc / 8;
        MultipathSet mp;
        mp.paths.push_back(path_at_bins(double(c.geometry.m_cols) / 2 + 0.3, double(c.geometry.m_rows) / 2 - 0.2,
                                        double(cfg.cp_length / 2) + 0.37, double(cfg.slots_per_frame / 2) + 0.25, 1.0,
                                        c.geometry, cfg));
        dev.push_back(lemma4_check(mp, c.geometry, cfg).delay_deviation);
    }
    const bool sweep_ok = dev[0] > dev[1] && dev[1] > dev[2];
    out << "lemma4_off_grid nc=256,512,1024 delay_deviation=" << dev[0] << ',' << dev[1] << ',' << dev[2]
        << " result=" << (sweep_ok ? "PASS" : "FAIL") << '\n';
    pass = pass && sweep_ok;

    // Trace identity at tiny dimensions, one symbol per slot.
    ArrayGeometry g = ArrayGeometry::half_wavelength(2, 2, kDefaultCarrierHz);
    OfdmConfig tiny;
    tiny.n_subcarriers = 8;
    tiny.cp_length = 4;
    tiny.slots_per_frame = 4;
    tiny.symbols_per_slot = 1;
    Rng trng(derive_seed(c.seed, streams::verify, 6));
    const MultipathSet a = random_off_grid_set(3, g, tiny, trng);
    const MultipathSet b = random_off_grid_set(3, g, tiny, trng);
    const double ti = trace_identity_deviation(a, b, g, tiny);
    const bool ti_ok = ti <= 1e-8;
    out << "trace_identity rel_deviation=" << ti << " result=" << (ti_ok ? "PASS" : "FAIL") << '\n';
    pass = pass && ti_ok;

    out << "result=" << (pass ? "PASS" : "FAIL") << '\n';
    if (!pass) throw ThresholdFailure("lemma checks failed");
    return kExitOk;
}

int cmd_fingerprint_show(const Flags& f, std::ostream& out) {
    const EngineConfig c = resolve_config(f);
    const Scene scene = build_scene(c.scene);
    const UtState ut = probe_state(c);
    const TransformSet t = reduced_transform_matrices(c.geometry, c.ofdm);
    const FingerprintRecord r =
        make_record(scene, ut, 0, c.dataset.snr_db, c.geometry, c.ofdm, t, dataset_options(c),
                    derive_seed(c.seed, streams::record, 0));
    const RTensor3& F = r.tbf.data;
    const std::size_t A = F.extent(0), G = F.extent(1), N = F.extent(2);
    if (!f.out.empty()) {
        const fs::path dir = require_out(f);
        auto ad = open_csv(dir / "slice_angle_delay.csv");
        ad << "angle,delay,power\n";
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t d = 0; d < G; ++d) {
                double s = 0.0;
                for (std::size_t n = 0; n < N; ++n) s += F(a, d, n);
                ad << a << ',' << d << ',' << s << '\n';
            }
        auto an = open_csv(dir / "slice_angle_doppler.csv");
        an << "angle,doppler,power\n";
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t n = 0; n < N; ++n) {
                double s = 0.0;
                for (std::size_t d = 0; d < G; ++d) s += F(a, d, n);
                an << a << ',' << n << ',' << s << '\n';
            }
        auto dn = open_csv(dir / "slice_delay_doppler.csv");
        dn << "delay,doppler,power\n";
        for (std::size_t d = 0; d < G; ++d)
            for (std::size_t n = 0; n < N; ++n) {
                double s = 0.0;
                for (std::size_t a = 0; a < A; ++a) s += F(a, d, n);
                dn << d << ',' << n << ',' << s << '\n';
            }
        auto full = open_csv(dir / "tbf.csv");
        full << "angle,delay,doppler,power\n";
        for (std::size_t a = 0; a < A; ++a)
            for (std::size_t d = 0; d < G; ++d)
                for (std::size_t n = 0; n < N; ++n) full << a << ',' << d << ',' << n << ',' << F(a, d, n) << '\n';
    }
    std::size_t peak = 0;
    auto flat = F.flat();
    for (std::size_t i = 1; i < flat.size(); ++i)
        if (flat[i] > flat[peak]) peak = i;
    emit(out, json{{"command", "fingerprint show"},
                   {"shape", {A, G, N}},
                   {"snr_db", snr_json(r.snr_db)},
                   {"n_draws", r.tbf.meta.n_draws},
                   {"total_power", sum(F)},
                   {"peak", {{"angle", peak / (G * N)}, {"delay", (peak / N) % G}, {"doppler", peak % N}}},
                   {"direction_class", r.direction_class}});
    return kExitOk;
}

int cmd_preprocess_sweep(const Flags& f, std::ostream& out) {
    const EngineConfig c = resolve_config(f);
    std::vector<double> gammas = f.gamma.empty() ? std::vector<double>{0.01, 0.02, 0.05, 0.1, 0.2} : f.gamma;
    std::sort(gammas.begin(), gammas.end());
    const Scene scene = build_scene(c.scene);
    const auto states = random_states(64, c.scene.extent, c.dataset.floors, c.dataset.speed,
                                      derive_seed(c.seed, streams::verify, 3));
    const auto records = build_records(scene, states, c.dataset.snr_db, c.geometry, c.ofdm, dataset_options(c));
    std::ostringstream csv;
    csv << std::setprecision(17) << "gamma,mean_support,min_support,max_support\n";
    json rows = json::array();
    bool monotone = true;
    std::vector<BinaryMatrix> prev;
    for (double g : gammas) {
        double total = 0.0;
        std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
        std::vector<BinaryMatrix> masks;
        for (std::size_t i = 0; i < records.size(); ++i) {
            masks.push_back(mask(records[i].inputs.x_ad, g));
            const auto n = std::size_t(masks.back().cast<int>().sum());
            total += double(n);
            lo = std::min(lo, n);
            hi = std::max(hi, n);
            if (!prev.empty()) monotone = monotone && ((masks.back().array() <= prev[i].array()).all());
        }
        prev = std::move(masks);
        const double mean = total / double(records.size());
        csv << g << ',' << mean << ',' << lo << ',' << hi << '\n';
        rows.push_back({{"gamma", g}, {"mean_support", mean}, {"min_support", lo}, {"max_support", hi}});
    }
    if (!f.out.empty()) open_csv(require_out(f) / "gamma_sweep.csv") << csv.str();
    emit(out, json{{"command", "preprocess sweep"}, {"records", records.size()}, {"sweep", rows},
                   {"nested_masks", monotone}});
    if (!monotone) throw ThresholdFailure("mask support is not nested across gamma");
    return kExitOk;
}

struct LabelledSet {
    std::vector<Vec3> positions;
    std::vector<Eigen::VectorXd> features;
};

LabelledSet load_labelled(const fs::path& manifest_path) {
    const Manifest m = read_manifest(manifest_path);
    const fs::path base = manifest_path.parent_path();
    validate_manifest(m, base);
    LabelledSet s;
    for (const auto& r : m.records) {
        s.positions.emplace_back(r.position_m[0], r.position_m[1], r.position_m[2]);
        s.features.push_back(flatten_row_major(blob_to_matrix(read_tensor(base / r.blobs.x_ad))));
    }
    return s;
}

json report_json(const EvalReport& rep) {
    json buckets = json::array();
    for (const auto& b : rep.range_buckets) {
        buckets.push_back({{"range_m", b.label()},
                           {"count", b.count},
                           {"mean_error_m", std::isnan(b.mean_error) ? json(nullptr) : json(b.mean_error)}});
    }
    return json{{"samples", rep.errors.size()}, {"mean_error_m", rep.mean_error}, {"range_buckets", buckets}};
}

void write_eval_csv(const fs::path& dir, const EvalReport& rep, const std::string& prefix) {
    auto cdf = open_csv(dir / (prefix + "cdf.csv"));
    cdf << "error_m,cumulative_fraction\n";
    for (const auto& [e, p] : rep.cdf_points) cdf << e << ',' << p << '\n';
    auto bk = open_csv(dir / (prefix + "range_buckets.csv"));
    bk << "range_m,count,mean_error_m\n";
    for (const auto& b : rep.range_buckets) {
        bk << b.label() << ',' << b.count << ',';
        if (std::isnan(b.mean_error)) {
            bk << "";
        } else {
            bk << b.mean_error;
        }
        bk << '\n';
    }
}

int cmd_wknn_eval(const Flags& f, std::ostream& out) {
    const EngineConfig c = resolve_config(f);
    const std::size_t k = c.wknn.k;
    const Weighting w = c.wknn.weighting;

    if (!f.db.empty() || !f.queries.empty()) {
        if (f.db.empty() || f.queries.empty()) throw ParameterError("--db and --queries go together");
        const LabelledSet dbs = load_labelled(f.db);
        const LabelledSet qs = load_labelled(f.queries);
        FingerprintDatabase db;
        for (std::size_t i = 0; i < dbs.positions.size(); ++i) db.add({dbs.positions[i], 0, dbs.features[i]});
        std::vector<Vec3> est;
        for (const auto& q : qs.features) est.push_back(wknn_locate(db, q, k, w));
        const EvalReport rep = eval_localization(est, qs.positions, c.scene.bs_position);
        if (!f.out.empty()) write_eval_csv(require_out(f), rep, "");
        json j = report_json(rep);
        j["command"] = "wknn eval";
        j["k"] = k;
        emit(out, j);
        return kExitOk;
    }

    const Scene scene = build_scene(c.scene);
    const DatasetOptions opt = dataset_options(c);
    DatasetOptions db_opt = opt;
    const auto grid = grid_states(c);
    const auto db_records = build_records(scene, grid, c.dataset.snr_db, c.geometry, c.ofdm, db_opt);
    const FingerprintDatabase db(db_records);
    const auto states = random_states(c.wknn.n_queries, c.scene.extent, c.dataset.floors, c.dataset.speed,
                                      derive_seed(c.seed, streams::query, 0));
    std::vector<Vec3> truths;
    for (const auto& s : states) truths.push_back(s.position);

    auto evaluate = [&](std::optional<double> snr) {
        DatasetOptions q = opt;
        q.seed = derive_seed(c.seed, streams::query, 1);
        const auto recs = build_records(scene, states, snr, c.geometry, c.ofdm, q, db_records.size());
        std::vector<Vec3> est;
        for (const auto& r : recs) est.push_back(wknn_locate(db, r.inputs.x_ad, k, w));
        return eval_localization(est, truths, c.scene.bs_position);
    };

    const EvalReport main = evaluate(c.dataset.snr_db);
    json sweep = json::array();
    std::ostringstream sweep_csv;
    sweep_csv << std::setprecision(17) << "snr_db,mean_error_m\n";
    for (double s : c.wknn.snr_sweep_db) {
        const EvalReport r = evaluate(s);
        sweep.push_back({{"snr_db", s}, {"mean_error_m", r.mean_error}});
        sweep_csv << s << ',' << r.mean_error << '\n';
    }
    if (!f.out.empty()) {
        const fs::path dir = require_out(f);
        write_eval_csv(dir, main, "");
        open_csv(dir / "snr_sweep.csv") << sweep_csv.str();
    }
    json j = report_json(main);
    j["command"] = "wknn eval";
    j["k"] = k;
    j["database_records"] = db.size();
    j["snr_db"] = snr_json(c.dataset.snr_db);
    j["snr_sweep"] = sweep;
    emit(out, j);
    return kExitOk;
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON configuration file");
    sub->add_option("--seed", f.seed, "Seed for every random draw");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--snr-db", f.snr_db, "SNR in dB, or 'none' for noiseless fingerprints");
    sub->add_option("--gamma", f.gamma, "Mask threshold (comma-separated list for sweeps)")->delimiter(',');
    sub->add_option("--k", f.k, "WKNN neighbour count");
    sub->add_flag("--snap-to-grid", f.snap, "Round path parameters to the nearest TB bins");
    sub->add_option("--threads", f.threads, "Worker threads for dataset construction (0 = all)");
}

}  // namespace

std::string usage() {
    return "usage: tbf <command> [options]\n"
           "commands:\n"
           "  scene gen            place scatterers and list the probe UT's paths\n"
           "  dataset build        grid dataset as manifest + f64 blobs\n"
           "  verify theorem1      concentration of path power in predicted bins\n"
           "  verify theorem2      TBF vs SFTF collinearity at small dimensions\n"
           "  verify lemmas        unitary invariance, extensions, trace identity\n"
           "  fingerprint show     TBF slice CSVs for the probe UT\n"
           "  preprocess sweep     mask support over a gamma sweep\n"
           "  wknn eval            WKNN baseline: CDF, range buckets, SNR sweep\n"
           "  export               dataset for downstream training, validated on re-read\n"
           "options: --config <json> --seed <u64> --out <dir> --snr-db <f|none> --gamma <f[,f...]>\n"
           "         --k <n> --snap-to-grid --threads <n>; wknn eval: --db <manifest> --queries <manifest>;\n"
           "         export: --dtype f32|f64\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Triple-beam fingerprint engine", "tbf"};
    app.require_subcommand(1);
    app.set_help_flag("-h,--help");
    Flags f;

    auto* scene = app.add_subcommand("scene", "Scene tools")->require_subcommand(1);
    auto* scene_gen = scene->add_subcommand("gen", "Generate a scene");
    auto* dataset = app.add_subcommand("dataset", "Dataset tools")->require_subcommand(1);
    auto* dataset_build = dataset->add_subcommand("build", "Build a grid dataset");
    auto* verify = app.add_subcommand("verify", "Numerical verification")->require_subcommand(1);
    auto* v_t1 = verify->add_subcommand("theorem1", "Concentration check");
    auto* v_t2 = verify->add_subcommand("theorem2", "Collinearity equivalence");
    auto* v_lem = verify->add_subcommand("lemmas", "Lemma checks");
    auto* fingerprint = app.add_subcommand("fingerprint", "Fingerprint tools")->require_subcommand(1);
    auto* fp_show = fingerprint->add_subcommand("show", "Emit TBF slices");
    auto* preprocess = app.add_subcommand("preprocess", "Preprocessing tools")->require_subcommand(1);
    auto* pp_sweep = preprocess->add_subcommand("sweep", "Gamma sweep");
    auto* wknn = app.add_subcommand("wknn", "WKNN baseline")->require_subcommand(1);
    auto* wknn_eval = wknn->add_subcommand("eval", "Evaluate WKNN");
    auto* exp = app.add_subcommand("export", "Export a validated dataset");

    for (auto* sub : {scene_gen, dataset_build, v_t1, v_t2, v_lem, fp_show, pp_sweep, wknn_eval, exp})
        add_common(sub, f);
    wknn_eval->add_option("--db", f.db, "Database manifest");
    wknn_eval->add_option("--queries", f.queries, "Query manifest");
    exp->add_option("--dtype", f.dtype, "Blob dtype: f32 or f64");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << usage();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << usage();
        return kExitUsage;
    }

    for (auto* sub : {scene_gen, dataset_build, v_t1, v_t2, v_lem, fp_show, pp_sweep, wknn_eval, exp})
        if (*sub) f.leaf = sub;

    try {
        if (*scene_gen) return cmd_scene_gen(f, out);
        if (*dataset_build) return cmd_dataset_build(f, out, false);
        if (*exp) return cmd_dataset_build(f, out, true);
        if (*v_t1) return cmd_verify_theorem1(f, out);
        if (*v_t2) return cmd_verify_theorem2(f, out);
        if (*v_lem) return cmd_verify_lemmas(f, out);
        if (*fp_show) return cmd_fingerprint_show(f, out);
        if (*pp_sweep) return cmd_preprocess_sweep(f, out);
        if (*wknn_eval) return cmd_wknn_eval(f, out);
    } catch (const ThresholdFailure& e) {
        err << "verification failed: " << e.what() << '\n';
        return kExitThreshold;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    err << usage();
    return kExitUsage;
}

}  // namespace tbf::cli
