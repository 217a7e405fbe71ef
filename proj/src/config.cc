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

#include "qdeph/config.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qdeph {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    if (!std::isfinite(v)) {
        throw ConfigError(key, "must be finite");
    }
    return v;
}

std::uint64_t to_u64(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    if (text.empty() || text[0] == '-') {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    unsigned long long v = std::strtoull(text.c_str(), &end, 0);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(v);
}

// Maps a library validation message "key: detail" back to its key.
[[noreturn]] void rethrow_keyed(const std::invalid_argument &e, const std::string &fallback_key) {
    std::string msg = e.what();
    std::size_t colon = msg.find(": ");
    if (colon != std::string::npos && msg.find('.') < colon && msg.find(' ') > colon) {
        throw ConfigError(msg.substr(0, colon), msg.substr(colon + 2));
    }
    throw ConfigError(fallback_key, msg);
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::istringstream is{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::size_t hash = line.find(" #");
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'section.key = value'");
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "key must have the form section.key");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError(key, "given more than once");
        }
    }
    return kv;
}

const std::vector<std::string> &known_config_keys() {
    static const std::vector<std::string> keys = {
        "noise.kind",         "noise.gamma",         "noise.sigma",       "noise.kappa",   "noise.mu",
        "grid.t_max",         "grid.n_out",          "grid.substeps",     "run.omega0",    "run.n_realizations",
        "run.n_curves",       "run.seed",            "run.outputs",       "run.output_dir", "run.significance",
        "run.threads",        "run.format",          "run.error_method",  "spectrum.transient_cut",
        "spectrum.window",    "autocorr.max_lag",
    };
    return keys;
}

TimeGrid RunConfig::grid() const {
    if (substeps) {
        return TimeGrid(t_max, n_out, *substeps);
    }
    return TimeGrid::with_default_substeps(t_max, n_out, noise);
}

bool RunConfig::wants(std::string_view selector) const {
    return std::find(outputs.begin(), outputs.end(), selector) != outputs.end();
}

io::Provenance RunConfig::provenance() const {
    io::Provenance p;
    TimeGrid g = grid();
    p.emplace_back("noise.kind", std::string(to_string(noise.kind)));
    p.emplace_back("noise.gamma", io::format_double(noise.gamma));
    if (noise.sigma) p.emplace_back("noise.sigma", io::format_double(*noise.sigma));
    if (noise.kappa) p.emplace_back("noise.kappa", io::format_double(*noise.kappa));
    if (noise.mu) p.emplace_back("noise.mu", io::format_double(*noise.mu));
    p.emplace_back("grid.t_max", io::format_double(g.t_max()));
    p.emplace_back("grid.n_out", std::to_string(g.size()));
    p.emplace_back("grid.substeps", std::to_string(g.substeps()));
    p.emplace_back("run.omega0", io::format_double(omega0));
    p.emplace_back("run.n_realizations", std::to_string(n_realizations));
    if (n_curves) p.emplace_back("run.n_curves", std::to_string(*n_curves));
    p.emplace_back("run.seed", std::to_string(seed));
    std::string outs;
    for (const auto &o : outputs) {
        outs += (outs.empty() ? "" : ",") + o;
    }
    p.emplace_back("run.outputs", outs);
    p.emplace_back("run.significance", io::format_double(significance));
    p.emplace_back("run.format", format);
    p.emplace_back("run.error_method", error_method == ErrorMethod::delta ? "delta" : "bootstrap");
    if (wants("spectrum") || wants("autocorr")) {
        p.emplace_back("spectrum.transient_cut", io::format_double(transient_cut));
        p.emplace_back("spectrum.window", std::string(to_string(window)));
    }
    if (wants("autocorr")) {
        p.emplace_back("autocorr.max_lag", io::format_double(max_lag));
    }
    return p;
}

RunConfig resolve_config(const KeyValues &kv) {
    const auto &known = known_config_keys();
    for (const auto &[k, v] : kv) {
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            throw ConfigError(k, "unknown key");
        }
    }
    auto get = [&](const char *key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto get_double = [&](const char *key) -> std::optional<double> {
        auto s = get(key);
        if (!s) return std::nullopt;
        return to_double(key, *s);
    };
    auto get_count = [&](const char *key) -> std::optional<std::size_t> {
        auto s = get(key);
        if (!s) return std::nullopt;
        return static_cast<std::size_t>(to_u64(key, *s));
    };

    RunConfig cfg;
    auto kind = get("noise.kind");
    if (!kind) {
        throw ConfigError("noise.kind", "required (ou, rtn, filtered_ou, filtered_rtn)");
    }
    try {
        cfg.noise.kind = parse_noise_kind(*kind);
    } catch (const std::invalid_argument &e) {
        throw ConfigError("noise.kind", e.what());
    }
    auto gamma = get_double("noise.gamma");
    if (!gamma) {
        throw ConfigError("noise.gamma", "required");
    }
    cfg.noise.gamma = *gamma;
    cfg.noise.sigma = get_double("noise.sigma");
    cfg.noise.kappa = get_double("noise.kappa");
    cfg.noise.mu = get_double("noise.mu");
    try {
        cfg.noise.validate();
    } catch (const std::invalid_argument &e) {
        rethrow_keyed(e, "noise.kind");
    }

    if (auto v = get_double("grid.t_max")) cfg.t_max = *v;
    if (auto v = get_count("grid.n_out")) cfg.n_out = *v;
    cfg.substeps = get_count("grid.substeps");
    if (!(cfg.t_max > 0.0)) throw ConfigError("grid.t_max", "must be > 0");
    if (cfg.n_out < 2) throw ConfigError("grid.n_out", "must be >= 2");
    if (cfg.substeps && *cfg.substeps < 1) throw ConfigError("grid.substeps", "must be >= 1");

    if (auto v = get_double("run.omega0")) cfg.omega0 = *v;
    if (!(cfg.omega0 > 0.0)) throw ConfigError("run.omega0", "must be > 0");
    if (auto v = get_count("run.n_realizations")) cfg.n_realizations = *v;
    if (cfg.n_realizations < 1) throw ConfigError("run.n_realizations", "must be >= 1");
    cfg.n_curves = get_count("run.n_curves");
    if (cfg.n_curves && *cfg.n_curves < 2) throw ConfigError("run.n_curves", "must be >= 2");
    if (auto s = get("run.seed")) cfg.seed = to_u64("run.seed", *s);
    if (auto s = get("run.outputs")) {
        cfg.outputs = split_list(*s);
        for (const auto &o : cfg.outputs) {
            if (std::find_if(std::begin(kOutputSelectors), std::end(kOutputSelectors),
                             [&](const char *x) { return o == x; }) == std::end(kOutputSelectors)) {
                throw ConfigError("run.outputs",
                                  "unknown selector '" + o +
                                      "' (expected curve, bands, spectrum, autocorr, report, svg, ensemble)");
            }
        }
    }
    if (auto s = get("run.output_dir")) {
        if (s->empty()) throw ConfigError("run.output_dir", "must not be empty");
        cfg.output_dir = *s;
    }
    if (auto v = get_double("run.significance")) cfg.significance = *v;
    if (!(cfg.significance > 0.0)) throw ConfigError("run.significance", "must be > 0");
    if (auto v = get_count("run.threads")) {
        if (*v < 1 || *v > 1024) throw ConfigError("run.threads", "must be between 1 and 1024");
        cfg.threads = static_cast<int>(*v);
    }
    if (auto s = get("run.format")) {
        if (*s != "csv" && *s != "json") throw ConfigError("run.format", "expected csv or json");
        cfg.format = *s;
    }
    if (auto s = get("run.error_method")) {
        if (*s == "delta") {
            cfg.error_method = ErrorMethod::delta;
        } else if (*s == "bootstrap") {
            cfg.error_method = ErrorMethod::bootstrap;
        } else {
            throw ConfigError("run.error_method", "expected delta or bootstrap");
        }
    }
    if (cfg.wants("bands") && !cfg.n_curves) {
        throw ConfigError("run.n_curves", "required when run.outputs includes bands");
    }
    if (cfg.n_curves && cfg.error_method == ErrorMethod::bootstrap) {
        throw ConfigError("run.error_method", "bootstrap is not available together with run.n_curves");
    }

    TimeGrid grid = [&] {
        try {
            return cfg.grid();
        } catch (const std::invalid_argument &e) {
            rethrow_keyed(e, "grid.t_max");
        }
    }();

    if (auto s = get("spectrum.window")) {
        try {
            cfg.window = parse_window(*s);
        } catch (const std::invalid_argument &e) {
            rethrow_keyed(e, "spectrum.window");
        }
    }
    bool spectral = cfg.wants("spectrum") || cfg.wants("autocorr");
    if (auto v = get_double("spectrum.transient_cut")) {
        cfg.transient_cut = *v;
    } else if (spectral) {
        if (!(cfg.noise.min_rate() > 0.0)) {
            throw ConfigError("spectrum.transient_cut", "required when the noise has no positive rate");
        }
        cfg.transient_cut = std::min(default_transient_cut(cfg.noise), 0.5 * cfg.t_max);
    }
    if (cfg.transient_cut < 0.0 || cfg.transient_cut >= cfg.t_max) {
        throw ConfigError("spectrum.transient_cut", "must lie in [0, grid.t_max)");
    }
    if (cfg.wants("spectrum")) {
        double dt = grid.dt();
        std::size_t i0 = static_cast<std::size_t>(std::ceil(cfg.transient_cut / dt - 1e-9));
        if (i0 >= grid.size() || grid.size() - i0 < 64) {
            throw ConfigError("spectrum.transient_cut", "fewer than 64 grid points remain after the cut");
        }
    }
    if (auto v = get_double("autocorr.max_lag")) {
        cfg.max_lag = *v;
    } else if (cfg.wants("autocorr")) {
        cfg.max_lag = std::min(10.0 / cfg.noise.min_rate(), 0.5 * (cfg.t_max - cfg.transient_cut));
    }
    if (cfg.wants("autocorr") && (cfg.max_lag < 0.0 || cfg.max_lag >= cfg.t_max - cfg.transient_cut)) {
        throw ConfigError("autocorr.max_lag", "must lie in [0, grid.t_max - spectrum.transient_cut)");
    }
    return cfg;
}

RunConfig parse_config(std::string_view text) {
    return resolve_config(parse_key_values(text));
}

}  // namespace qdeph
