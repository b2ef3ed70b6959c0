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

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "tbf/cli.hpp"
#include "tbf/store.hpp"

using namespace tbf;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    Run r;
    r.code = cli::dispatch(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::string small_config(const std::filesystem::path& dir) {
    const auto p = dir / "small.json";
    std::ofstream(p) << R"({"seed": 3, "scene": {"extent": 1.0, "shell_half_width": 3.0, "n_scatterers": 4},
                            "dataset": {"n_draws": 4}, "wknn": {"n_queries": 5, "k": 2, "snr_sweep_db": [10]}})";
    return p.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 64") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"bogus"}).code == cli::kExitUsage);
    CHECK(run({"verify", "nothing"}).code == cli::kExitUsage);
    CHECK(run({"verify", "theorem1", "--seed", "abc"}).code == cli::kExitUsage);
    const Run help = run({"--help"});
    CHECK(help.code == cli::kExitOk);
    CHECK(help.out.find("usage: tbf") != std::string::npos);
}

TEST_CASE("validation errors exit with 1") {
    const auto dir = test::scratch("cli_validation");
    CHECK(run({"scene", "gen", "--config", (dir / "missing.json").string()}).code == cli::kExitValidation);
    std::ofstream(dir / "bad.json") << R"({"ofdm": {"n_subcarrier": 8}})";
    const Run r = run({"scene", "gen", "--config", (dir / "bad.json").string()});
    CHECK(r.code == cli::kExitValidation);
    CHECK(r.err.find("ofdm.n_subcarrier") != std::string::npos);
    CHECK(run({"scene", "gen", "--snr-db", "loud"}).code == cli::kExitValidation);
}

TEST_CASE("verification commands") {
    const auto dir = test::scratch("cli_verify");
    const std::string cfg = small_config(dir);
    const Run t1 = run({"verify", "theorem1", "--config", cfg, "--snap-to-grid"});
    CHECK(t1.code == cli::kExitOk);
    CHECK(t1.out.find("PASS") != std::string::npos);
    CHECK(run({"verify", "lemmas", "--config", cfg}).code == cli::kExitOk);
}

TEST_CASE("dataset build, export and WKNN on its own database") {
    const auto dir = test::scratch("cli_dataset");
    const std::string cfg = small_config(dir);
    const auto built = dir / "built";
    const Run b = run({"dataset", "build", "--config", cfg, "--out", built.string(), "--snr-db", "none"});
    REQUIRE(b.code == cli::kExitOk);
    const Manifest m = read_manifest(built / "manifest.json");
    CHECK(m.records.size() == 9);
    CHECK_NOTHROW(validate_manifest(m, built));
    CHECK(read_tensor(built / m.records[0].blobs.tbf).dtype == DType::F64);

    const auto exported = dir / "exported";
    REQUIRE(run({"export", "--config", cfg, "--out", exported.string()}).code == cli::kExitOk);
    const Manifest e = read_manifest(exported / "manifest.json");
    CHECK(read_tensor(exported / e.records[0].blobs.x_ad).dtype == DType::F32);

    const std::string mpath = (built / "manifest.json").string();
    const auto eval_dir = dir / "eval";
    const Run w = run({"wknn", "eval", "--db", mpath, "--queries", mpath, "--out", eval_dir.string()});
    REQUIRE(w.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(w.out);
    CHECK(j["mean_error_m"].get<double>() == 0.0);
    CHECK(std::filesystem::exists(eval_dir / "cdf.csv"));
    CHECK(std::filesystem::exists(eval_dir / "range_buckets.csv"));
}

TEST_CASE("fingerprint show and gamma sweep write CSVs") {
    const auto dir = test::scratch("cli_show");
    const std::string cfg = small_config(dir);
    CHECK(run({"fingerprint", "show", "--config", cfg, "--out", (dir / "show").string()}).code == cli::kExitOk);
    CHECK(std::filesystem::exists(dir / "show" / "tbf.csv"));
    CHECK(run({"preprocess", "sweep", "--config", cfg, "--gamma", "0.01,0.1", "--out", (dir / "sweep").string()})
              .code == cli::kExitOk);
    CHECK(std::filesystem::exists(dir / "sweep" / "gamma_sweep.csv"));
}

}  // TEST_SUITE
