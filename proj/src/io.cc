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

#include "qdeph/io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qdeph::io {

namespace {

void write_optional(std::ostream &os, const std::optional<std::vector<double>> &col, std::size_t k) {
    os << ',';
    if (col) {
        os << format_double((*col)[k]);
    }
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_comments(std::ostream &os, const Provenance &meta) {
    for (const auto &[k, v] : meta) {
        os << "# " << k << " = " << v << '\n';
    }
}

nlohmann::json spec_to_json(const NoiseSpec &spec) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(spec.kind));
    j["gamma"] = spec.gamma;
    if (spec.sigma) j["sigma"] = *spec.sigma;
    if (spec.kappa) j["kappa"] = *spec.kappa;
    if (spec.mu) j["mu"] = *spec.mu;
    return j;
}

NoiseSpec spec_from_json(const nlohmann::json &j) {
    NoiseSpec s;
    s.kind = parse_noise_kind(j.at("kind").get<std::string>());
    s.gamma = j.at("gamma").get<double>();
    if (j.contains("sigma")) s.sigma = j["sigma"].get<double>();
    if (j.contains("kappa")) s.kappa = j["kappa"].get<double>();
    if (j.contains("mu")) s.mu = j["mu"].get<double>();
    s.validate();
    return s;
}

nlohmann::json grid_to_json(const TimeGrid &grid) {
    return {{"t_max", grid.t_max()}, {"n_out", grid.size()}, {"substeps", grid.substeps()}};
}

TimeGrid grid_from_json(const nlohmann::json &j) {
    return TimeGrid(j.at("t_max").get<double>(), j.at("n_out").get<std::size_t>(),
                    j.at("substeps").get<std::size_t>());
}

nlohmann::json provenance_to_json(const Provenance &meta) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto &[k, v] : meta) {
        j[k] = v;
    }
    return j;
}

void write_ensemble_csv(std::ostream &os, const TrajectoryEnsemble &ens, const Provenance &meta) {
    write_comments(os, meta);
    os << 't';
    for (std::size_t i = 0; i < ens.n_paths; ++i) {
        os << ",x_" << (i + 1);
    }
    os << '\n';
    std::size_t m = ens.grid.size();
    for (std::size_t k = 0; k < m; ++k) {
        os << format_double(ens.grid.time(k));
        for (std::size_t i = 0; i < ens.n_paths; ++i) {
            os << ',' << format_double(ens.values[i * m + k]);
        }
        os << '\n';
    }
}

nlohmann::json ensemble_metadata(const TrajectoryEnsemble &ens, const Provenance &meta) {
    nlohmann::json j;
    j["spec"] = spec_to_json(ens.spec);
    j["grid"] = grid_to_json(ens.grid);
    j["master_seed"] = ens.master_seed;
    j["n_paths"] = ens.n_paths;
    j["warnings"] = ens.warnings;
    j["config"] = provenance_to_json(meta);
    return j;
}

TrajectoryEnsemble read_ensemble(std::istream &csv, const nlohmann::json &sidecar) {
    TrajectoryEnsemble ens;
    ens.spec = spec_from_json(sidecar.at("spec"));
    ens.grid = grid_from_json(sidecar.at("grid"));
    ens.master_seed = sidecar.at("master_seed").get<std::uint64_t>();
    ens.n_paths = sidecar.at("n_paths").get<std::size_t>();
    std::size_t m = ens.grid.size();
    ens.values.assign(ens.n_paths * m, 0.0);
    std::string line;
    bool header_seen = false;
    std::size_t k = 0;
    while (std::getline(csv, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto cells = split_csv_line(line);
        if (cells.size() != ens.n_paths + 1 || k >= m) {
            throw std::runtime_error("read_ensemble: row " + std::to_string(k) + " does not match the sidecar");
        }
        for (std::size_t i = 0; i < ens.n_paths; ++i) {
            ens.values[i * m + k] = std::stod(cells[i + 1]);
        }
        ++k;
    }
    if (k != m) {
        throw std::runtime_error("read_ensemble: expected " + std::to_string(m) + " rows, found " +
                                 std::to_string(k));
    }
    return ens;
}

void write_curve_csv(std::ostream &os, const DephasingCurve &curve, const Provenance &meta) {
    write_comments(os, meta);
    os << "t,D,stderr,band_mean,band_lo1,band_hi1,band_lo2,band_hi2\n";
    const CurveBands *b = curve.bands ? &*curve.bands : nullptr;
    for (std::size_t k = 0; k < curve.d_values.size(); ++k) {
        os << format_double(curve.grid.time(k)) << ',' << format_double(curve.d_values[k]);
        write_optional(os, curve.std_err, k);
        if (b) {
            os << ',' << format_double(b->mean[k]) << ',' << format_double(b->lo1[k]) << ','
               << format_double(b->hi1[k]) << ',' << format_double(b->lo2[k]) << ',' << format_double(b->hi2[k]);
        } else {
            os << ",,,,,";
        }
        os << '\n';
    }
}

nlohmann::json curve_to_json(const DephasingCurve &curve, const Provenance &meta) {
    nlohmann::json j;
    j["config"] = provenance_to_json(meta);
    j["grid"] = grid_to_json(curve.grid);
    j["omega0"] = curve.omega0;
    j["n_realizations"] = curve.n_realizations;
    j["t"] = curve.grid.times();
    j["D"] = curve.d_values;
    j["stderr"] = curve.std_err ? nlohmann::json(*curve.std_err) : nlohmann::json(nullptr);
    if (curve.bands) {
        j["band_mean"] = curve.bands->mean;
        j["band_lo1"] = curve.bands->lo1;
        j["band_hi1"] = curve.bands->hi1;
        j["band_lo2"] = curve.bands->lo2;
        j["band_hi2"] = curve.bands->hi2;
    } else {
        for (const char *k : {"band_mean", "band_lo1", "band_hi1", "band_lo2", "band_hi2"}) {
            j[k] = nullptr;
        }
    }
    return j;
}

void write_spectrum_csv(std::ostream &os, const SpectrumEstimate &est, const Provenance &meta) {
    write_comments(os, meta);
    os << "omega,S,stderr\n";
    for (std::size_t k = 0; k < est.omegas.size(); ++k) {
        os << format_double(est.omegas[k]) << ',' << format_double(est.s_values[k]) << ','
           << format_double(est.std_err[k]) << '\n';
    }
}

nlohmann::json spectrum_to_json(const SpectrumEstimate &est, const Provenance &meta) {
    nlohmann::json j;
    j["config"] = provenance_to_json(meta);
    j["estimator"] = {{"method", "bartlett"},
                      {"window", std::string(to_string(est.window))},
                      {"n_segments", est.n_segments},
                      {"segment_length", est.segment_length},
                      {"transient_cut", est.transient_cut},
                      {"bin_width", est.bin_width},
                      {"sample_variance", est.sample_variance}};
    j["omega"] = est.omegas;
    j["S"] = est.s_values;
    j["stderr"] = est.std_err;
    return j;
}

void write_autocorr_csv(std::ostream &os, const AutocorrEstimate &est, const Provenance &meta) {
    write_table_csv(os, "tau", "value", est.taus, est.values, meta);
}

nlohmann::json autocorr_to_json(const AutocorrEstimate &est, const Provenance &meta) {
    nlohmann::json j;
    j["config"] = provenance_to_json(meta);
    j["transient_cut"] = est.transient_cut;
    j["n_paths"] = est.n_paths;
    j["tau"] = est.taus;
    j["value"] = est.values;
    return j;
}

nlohmann::json report_to_json(const RevivalReport &report, const Provenance &meta) {
    nlohmann::json j;
    j["config"] = provenance_to_json(meta);
    j["verdict"] = std::string(to_string(report.verdict));
    j["nm_measure"] = report.nm_measure;
    nlohmann::json revs = nlohmann::json::array();
    for (const Revival &r : report.revivals) {
        revs.push_back({{"t_start", r.t_start}, {"t_end", r.t_end}, {"depth", r.depth}});
    }
    j["revivals"] = revs;
    j["threshold_policy"] = {{"significance", report.policy.significance},
                             {"statistical", report.policy.statistical},
                             {"absolute_floor", report.policy.absolute_floor},
                             {"rule", report.policy.describe()}};
    return j;
}

void write_table_csv(std::ostream &os, const std::string &x_name, const std::string &y_name,
                     const std::vector<double> &x, const std::vector<double> &y, const Provenance &meta) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("write_table_csv: column lengths differ");
    }
    write_comments(os, meta);
    os << x_name << ',' << y_name << '\n';
    for (std::size_t k = 0; k < x.size(); ++k) {
        os << format_double(x[k]) << ',' << format_double(y[k]) << '\n';
    }
}

void write_file(const std::string &path, const std::string &text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
}

}  // namespace qdeph::io
