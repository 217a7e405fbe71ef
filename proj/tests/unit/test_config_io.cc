// Copyright 2026 The qdeph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "qdeph/config.h"
#include "qdeph/io.h"
#include "qdeph/svg.h"

using namespace qdeph;

namespace {

std::string key_of(const std::string &text) {
    try {
        parse_config(text);
    } catch (const ConfigError &e) {
        return e.key();
    }
    return "";
}

}  // namespace

TEST_CASE("key-value parsing") {
    KeyValues kv = parse_key_values("# comment\n\nnoise.kind = ou   # trailing\n  noise.gamma=0.1\n");
    CHECK(kv.at("noise.kind") == "ou");
    CHECK(kv.at("noise.gamma") == "0.1");
    CHECK_THROWS_WITH_AS(parse_key_values("noise.kind = ou\nnoise.kind = rtn\n"), doctest::Contains("noise.kind"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_key_values("a.b = 1\njust text\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("nosection = 1\n"), ConfigError);
}

TEST_CASE("resolved defaults") {
    RunConfig cfg = parse_config("noise.kind = ou\nnoise.gamma = 0.1\nnoise.sigma = 0.63\n");
    CHECK(cfg.t_max == 40.0);
    CHECK(cfg.n_out == 201);
    CHECK(cfg.n_realizations == 10000);
    CHECK(cfg.wants("curve"));
    CHECK_FALSE(cfg.wants("spectrum"));
    CHECK(cfg.grid().h() * 0.1 <= 0.05 + 1e-12);
}

TEST_CASE("errors name the offending key") {
    const std::string ou = "noise.kind = ou\nnoise.gamma = 0.1\n";
    CHECK(key_of(ou + "noise.sigma = -1\n") == "noise.sigma");
    CHECK(key_of("noise.kind = brownian\nnoise.gamma = 1\n") == "noise.kind");
    CHECK(key_of(ou + "noise.sigma = 1\nnoise.colour = red\n") == "noise.colour");
    CHECK(key_of(ou + "noise.sigma = 1\ngrid.n_out = 1\n") == "grid.n_out");
    CHECK(key_of(ou + "noise.sigma = 1\ngrid.t_max = abc\n") == "grid.t_max");
    CHECK(key_of(ou + "noise.sigma = 1\nrun.outputs = curve, movie\n") == "run.outputs");
    CHECK(key_of(ou + "noise.sigma = 1\nrun.outputs = bands\n") == "run.n_curves");
    CHECK(key_of(ou + "noise.sigma = 1\nrun.format = xml\n") == "run.format");
    CHECK(key_of(ou + "noise.sigma = 1\nrun.significance = 0\n") == "run.significance");
    CHECK(key_of(ou + "noise.sigma = 1\nrun.threads = 0\n") == "run.threads");
    CHECK(key_of(ou + "noise.sigma = 1\nrun.outputs = spectrum\nspectrum.window = kaiser\n") == "spectrum.window");
    CHECK(key_of(ou + "noise.sigma = 1\nrun.outputs = spectrum\nspectrum.transient_cut = 39.9\n") ==
          "spectrum.transient_cut");
    CHECK(key_of("noise.kind = rtn\nnoise.gamma = 0\nrun.outputs = spectrum\n") == "spectrum.transient_cut");
}

TEST_CASE("provenance excludes worker count and output directory") {
    const std::string base = "noise.kind = rtn\nnoise.gamma = 0.1\n";
    RunConfig a = parse_config(base + "run.threads = 1\nrun.output_dir = a\n");
    RunConfig b = parse_config(base + "run.threads = 8\nrun.output_dir = b\n");
    CHECK(a.provenance() == b.provenance());
    bool has_seed = false;
    for (const auto &[k, v] : a.provenance()) has_seed = has_seed || k == "run.seed";
    CHECK(has_seed);
}

TEST_CASE("ensemble csv round trip") {
    NoiseSpec spec = NoiseSpec::filtered_ou(0.5, 1.0, 2.0);
    TimeGrid grid(5.0, 11, 3);
    TrajectoryEnsemble e = sample(spec, grid, 9, 3);
    std::ostringstream csv;
    io::write_ensemble_csv(csv, e, {{"run.seed", "9"}});
    nlohmann::json meta = io::ensemble_metadata(e, {{"run.seed", "9"}});
    std::istringstream in(csv.str());
    TrajectoryEnsemble back = io::read_ensemble(in, meta);
    CHECK(back.n_paths == 3);
    CHECK(back.grid.size() == 11);
    CHECK(back.spec.kind == spec.kind);
    CHECK(back.values == e.values);
    CHECK(csv.str().rfind("# run.seed = 9", 0) == 0);
}

TEST_CASE("curve csv and json carry provenance and columns") {
    TimeGrid grid(1.0, 3);
    DephasingCurve c = analytic_curve(grid, 1.0, {1.0, 0.5, 0.25});
    std::ostringstream os;
    io::write_curve_csv(os, c, {{"noise.kind", "ou"}});
    std::string text = os.str();
    CHECK(text.find("# noise.kind = ou") != std::string::npos);
    CHECK(text.find("t,D,stderr,band_mean,band_lo1,band_hi1,band_lo2,band_hi2") != std::string::npos);
    CHECK(text.find("0.5,0.5,") != std::string::npos);
    nlohmann::json j = io::curve_to_json(c, {{"noise.kind", "ou"}});
    CHECK(j["D"].size() == 3);
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("noise parameters json round trip") {
    NoiseSpec z = NoiseSpec::filtered_rtn(0.5, 0.25);
    NoiseSpec back = io::spec_from_json(io::spec_to_json(z));
    CHECK(back.kind == z.kind);
    CHECK(back.gamma == z.gamma);
    CHECK(back.mu == z.mu);
}

TEST_CASE("svg rendering is deterministic and well formed") {
    svg::Plot p;
    p.title = "demo";
    p.x_label = "t";
    p.y_label = "D";
    p.series.push_back({"a", {0, 1, 2}, {1, 0.5, 0.25}});
    p.bands.push_back({"band", {0, 1, 2}, {0.9, 0.4, 0.2}, {1, 0.6, 0.3}});
    p.provenance = {{"note", "a--b"}};
    std::string s = svg::render(p);
    CHECK(s == svg::render(p));
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
    CHECK(s.find("polyline") != std::string::npos);
    CHECK(s.find("a--b") == std::string::npos);
}
