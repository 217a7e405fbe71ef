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

#include "qdeph/app.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qdeph/dephasing.h"
#include "qdeph/io.h"
#include "qdeph/rng.h"
#include "qdeph/spectral.h"
#include "qdeph/svg.h"
#include "qdeph/validation.h"

namespace qdeph {

namespace {

class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string join_path(const std::string &dir, const std::string &file) {
    return (std::filesystem::path(dir) / file).string();
}

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void require_finite(const std::vector<double> &v, const std::string &what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw NumericalError(what + ": non-finite value");
        }
    }
}

void require_finite(const DephasingCurve &curve) {
    require_finite(curve.d_values, "dephasing curve");
    if (curve.std_err) {
        require_finite(*curve.std_err, "dephasing standard error");
    }
}

std::string curve_text(const DephasingCurve &curve, const io::Provenance &meta, const std::string &format) {
    std::ostringstream os;
    if (format == "json") {
        os << io::curve_to_json(curve, meta).dump(2) << '\n';
    } else {
        io::write_curve_csv(os, curve, meta);
    }
    return os.str();
}

std::string spectrum_text(const SpectrumEstimate &est, const io::Provenance &meta, const std::string &format) {
    std::ostringstream os;
    if (format == "json") {
        os << io::spectrum_to_json(est, meta).dump(2) << '\n';
    } else {
        io::write_spectrum_csv(os, est, meta);
    }
    return os.str();
}

std::string table_text(const std::string &xn, const std::string &yn, const std::vector<double> &x,
                       const std::vector<double> &y, const io::Provenance &meta, const std::string &format) {
    std::ostringstream os;
    if (format == "json") {
        nlohmann::json j;
        j["config"] = io::provenance_to_json(meta);
        j[xn] = x;
        j[yn] = y;
        os << j.dump(2) << '\n';
    } else {
        io::write_table_csv(os, xn, yn, x, y, meta);
    }
    return os.str();
}

svg::Plot curve_plot(const std::string &title, const DephasingCurve &curve,
                     const std::optional<std::vector<double>> &overlay, const io::Provenance &meta) {
    svg::Plot plot;
    plot.title = title;
    plot.x_label = "t (1/omega0)";
    plot.y_label = "D(t)";
    plot.provenance = meta;
    std::vector<double> t = curve.grid.times();
    if (curve.bands) {
        plot.bands.push_back({"2 sigma band", t, curve.bands->lo2, curve.bands->hi2, "#2ca02c", 0.15});
        plot.bands.push_back({"1 sigma band", t, curve.bands->lo1, curve.bands->hi1, "#2ca02c", 0.3});
        plot.series.push_back({"mean of curves", t, curve.bands->mean, "#2ca02c", true});
    } else {
        plot.series.push_back({"Monte Carlo", t, curve.d_values, "#2ca02c", true});
    }
    if (overlay) {
        plot.series.push_back({"closed form", t, *overlay, "#d62728", false});
    }
    return plot;
}

io::Provenance figure_provenance(const FigureDef &fig, const FigureOptions &opts) {
    io::Provenance p;
    p.emplace_back("figure", fig.name);
    for (std::size_t i = 0; i < fig.specs.size(); ++i) {
        const NoiseSpec &s = fig.specs[i];
        std::string prefix = fig.specs.size() > 1 ? "noise[" + std::to_string(i) + "]." : "noise.";
        p.emplace_back(prefix + "kind", std::string(to_string(s.kind)));
        p.emplace_back(prefix + "gamma", io::format_double(s.gamma));
        if (s.sigma) p.emplace_back(prefix + "sigma", io::format_double(*s.sigma));
        if (s.kappa) p.emplace_back(prefix + "kappa", io::format_double(*s.kappa));
        if (s.mu) p.emplace_back(prefix + "mu", io::format_double(*s.mu));
    }
    p.emplace_back("grid.t_max", io::format_double(fig.t_max));
    p.emplace_back("grid.n_out", std::to_string(fig.n_out));
    p.emplace_back("run.omega0", "1");
    p.emplace_back("run.seed", std::to_string(opts.seed));
    if (fig.spectrum) {
        p.emplace_back("run.n_realizations", std::to_string(fig.spectrum_paths));
        p.emplace_back("spectrum.transient_cut", io::format_double(fig.transient_cut));
        p.emplace_back("spectrum.window", "hann");
    } else {
        p.emplace_back("run.n_curves", std::to_string(fig.n_curves));
        p.emplace_back("run.n_realizations", std::to_string(fig.n_real_per_curve));
        p.emplace_back("run.significance", io::format_double(opts.significance));
    }
    p.emplace_back("run.format", opts.format);
    return p;
}

FigureResult run_dephasing_figure(const FigureDef &fig, const FigureOptions &opts) {
    const NoiseSpec &spec = fig.specs.front();
    TimeGrid grid = TimeGrid::with_default_substeps(fig.t_max, fig.n_out, spec);
    io::Provenance meta = figure_provenance(fig, opts);
    meta.emplace_back("grid.substeps", std::to_string(grid.substeps()));
    CurveEnsemble ens = curve_ensemble(spec, grid, 1.0, fig.n_curves, fig.n_real_per_curve, opts.seed, opts.threads);
    const DephasingCurve &curve = ens.pooled;
    require_finite(curve);
    FigureResult res;
    res.report = detect_revivals(curve, opts.significance);
    std::optional<std::vector<double>> overlay = analytic_overlay(spec, grid, 1.0);
    std::string ext = opts.format == "json" ? ".json" : ".csv";

    std::string path = join_path(opts.out_dir, fig.name + "_curve" + ext);
    io::write_file(path, curve_text(curve, meta, opts.format));
    res.files.push_back(path);
    if (overlay) {
        std::size_t inside = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            double v = (*overlay)[k];
            if (v >= curve.bands->lo2[k] && v <= curve.bands->hi2[k]) ++inside;
        }
        res.band_coverage = static_cast<double>(inside) / static_cast<double>(grid.size());
        path = join_path(opts.out_dir, fig.name + "_analytic" + ext);
        io::write_file(path, table_text("t", "D", grid.times(), *overlay, meta, opts.format));
        res.files.push_back(path);
    }
    nlohmann::json report = io::report_to_json(*res.report, meta);
    report["figure"] = fig.name;
    report["band_coverage_2sigma"] = res.band_coverage ? nlohmann::json(*res.band_coverage) : nlohmann::json(nullptr);
    path = join_path(opts.out_dir, fig.name + "_report.json");
    io::write_file(path, report.dump(2) + "\n");
    res.files.push_back(path);
    path = join_path(opts.out_dir, fig.name + ".svg");
    io::write_file(path, svg::render(curve_plot(fig.title, curve, overlay, meta)));
    res.files.push_back(path);

    std::ostringstream os;
    os << fig.name << ": verdict=" << to_string(res.report->verdict) << " nm_measure=" << res.report->nm_measure
       << " revivals=" << res.report->revivals.size();
    if (res.band_coverage) {
        os << " coverage_2sigma=" << *res.band_coverage;
    }
    res.summary = os.str();
    return res;
}

FigureResult run_spectrum_figure(const FigureDef &fig, const FigureOptions &opts) {
    io::Provenance meta = figure_provenance(fig, opts);
    FigureResult res;
    std::string ext = opts.format == "json" ? ".json" : ".csv";
    svg::Plot plot;
    plot.title = fig.title;
    plot.x_label = "omega (omega0)";
    plot.y_label = "S(omega)";
    plot.provenance = meta;
    const char *colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
    nlohmann::json report;
    report["config"] = io::provenance_to_json(meta);
    report["figure"] = fig.name;
    report["spectra"] = nlohmann::json::array();
    std::ostringstream summary;
    summary << fig.name << ":";
    for (std::size_t i = 0; i < fig.specs.size(); ++i) {
        const NoiseSpec &spec = fig.specs[i];
        TimeGrid grid = TimeGrid::with_default_substeps(fig.t_max, fig.n_out, spec);
        SpectrumEstimate est = simulate_periodogram(spec, grid, derive_key(opts.seed, i), fig.spectrum_paths,
                                                    fig.transient_cut, Window::hann, std::nullopt, opts.threads);
        require_finite(est.s_values, "spectrum");
        double peak = peak_frequency(est, est.bin_width, 0.5 * est.omegas.back());
        SpectrumEstimate smooth = log_band_average(est, est.bin_width, 1.1);
        std::size_t peaks = count_significant_peaks(smooth, opts.significance);
        res.peak_omegas.push_back(peak);
        std::string tag = spec.mu ? "mu" + short_double(*spec.mu) : "spec" + std::to_string(i);
        std::string path = join_path(opts.out_dir, fig.name + "_spectrum_" + tag + ext);
        io::Provenance m = meta;
        m.emplace_back("spectrum.curve", tag);
        io::write_file(path, spectrum_text(est, m, opts.format));
        res.files.push_back(path);
        report["spectra"].push_back({{"label", tag},
                                     {"peak_omega", peak},
                                     {"significant_peaks_per_side", peaks},
                                     {"S0", est.s_values.front()},
                                     {"bin_width", est.bin_width},
                                     {"sample_variance", est.sample_variance}});
        std::vector<double> x, y;
        for (std::size_t k = 0; k < est.omegas.size() && est.omegas[k] <= 3.0; ++k) {
            x.push_back(est.omegas[k]);
            y.push_back(est.s_values[k]);
        }
        plot.series.push_back({tag, x, y, colors[i % 4], false});
        summary << ' ' << tag << " peak_omega=" << peak << " peaks=" << peaks;
    }
    std::string path = join_path(opts.out_dir, fig.name + "_report.json");
    io::write_file(path, report.dump(2) + "\n");
    res.files.push_back(path);
    path = join_path(opts.out_dir, fig.name + ".svg");
    io::write_file(path, svg::render(plot));
    res.files.push_back(path);
    res.summary = summary.str();
    return res;
}

}  // namespace

const std::vector<FigureDef> &figure_defs() {
    static const std::vector<FigureDef> defs = [] {
        std::vector<FigureDef> d;
        auto dephasing = [&](const char *name, const char *title, NoiseSpec spec,
                             std::optional<analytic::Formula> overlay) {
            FigureDef f;
            f.name = name;
            f.title = title;
            f.specs = {spec};
            f.overlay = overlay;
            d.push_back(f);
        };
        dephasing("fig3a", "OU noise, gamma=0.1, sigma=0.63", NoiseSpec::ou(0.1, 0.63), analytic::Formula::d_ou);
        dephasing("fig3b", "Random telegraph noise, gamma=0.1", NoiseSpec::rtn(0.1), analytic::Formula::d_rtn);
        dephasing("fig4a", "Filtered OU noise Y, gamma=0.1, sigma=0.63, kappa=1",
                  NoiseSpec::filtered_ou(0.1, 0.63, 1.0), analytic::Formula::d_y);
        dephasing("fig4b", "Filtered telegraph noise Z, gamma=0.1, mu=1", NoiseSpec::filtered_rtn(0.1, 1.0),
                  std::nullopt);
        dephasing("fig4c", "Filtered telegraph noise Z, gamma=0.1, mu=0.5", NoiseSpec::filtered_rtn(0.1, 0.5),
                  std::nullopt);
        FigureDef f1;
        f1.name = "fig1";
        f1.title = "Spectrum of Z, gamma=0.5, mu=0.5 and mu=1";
        f1.specs = {NoiseSpec::filtered_rtn(0.5, 0.5), NoiseSpec::filtered_rtn(0.5, 1.0)};
        f1.t_max = 400.0;
        f1.n_out = 4001;
        f1.spectrum = true;
        f1.transient_cut = 40.0;
        f1.spectrum_paths = 1000;
        d.push_back(f1);
        return d;
    }();
    return defs;
}

std::string figure_name_list() {
    std::string out;
    for (const auto &f : figure_defs()) {
        out += (out.empty() ? "" : ", ") + f.name;
    }
    return out;
}

const FigureDef *find_figure(std::string_view name) {
    for (const auto &f : figure_defs()) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

std::optional<std::vector<double>> analytic_overlay(const NoiseSpec &spec, const TimeGrid &grid, double omega0) {
    analytic::AnalyticParams p;
    p.gamma = spec.gamma;
    p.sigma = spec.sigma;
    p.kappa = spec.kappa;
    p.omega0 = omega0;
    switch (spec.kind) {
        case NoiseKind::ou:
            return analytic::tabulate(analytic::Formula::d_ou, p, grid.times());
        case NoiseKind::rtn:
            return analytic::tabulate(analytic::Formula::d_rtn, p, grid.times());
        case NoiseKind::filtered_ou:
            return analytic::tabulate(analytic::Formula::d_y, p, grid.times());
        case NoiseKind::filtered_rtn:
            return std::nullopt;
    }
    return std::nullopt;
}

FigureResult run_figure(const FigureDef &fig, const FigureOptions &opts) {
    if (opts.format != "csv" && opts.format != "json") {
        throw ConfigError("run.format", "expected csv or json");
    }
    if (!(opts.significance > 0.0)) {
        throw ConfigError("run.significance", "must be > 0");
    }
    return fig.spectrum ? run_spectrum_figure(fig, opts) : run_dephasing_figure(fig, opts);
}

int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    try {
        TimeGrid grid = cfg.grid();
        io::Provenance meta = cfg.provenance();
        for (const auto &w : grid_warnings(cfg.noise, grid)) {
            err << "warning: " << w << '\n';
        }
        std::string ext = cfg.format == "json" ? ".json" : ".csv";
        bool need_ensemble =
            cfg.wants("ensemble") || cfg.wants("autocorr") || cfg.error_method == ErrorMethod::bootstrap;
        std::optional<TrajectoryEnsemble> ensemble;
        if (need_ensemble) {
            ensemble = sample(cfg.noise, grid, cfg.seed, cfg.n_realizations, cfg.threads);
        }

        DephasingCurve curve;
        if (cfg.n_curves) {
            curve = curve_ensemble_stats(cfg.noise, grid, cfg.omega0, *cfg.n_curves, cfg.n_realizations, cfg.seed,
                                         cfg.threads);
        } else if (ensemble) {
            curve = dephasing_factor(integrate_paths(*ensemble), cfg.omega0, cfg.error_method, cfg.seed);
        } else {
            curve = simulate_curve(cfg.noise, grid, cfg.omega0, cfg.n_realizations, cfg.seed, cfg.threads);
        }
        require_finite(curve);
        RevivalReport report = detect_revivals(curve, cfg.significance);

        if (cfg.wants("curve") || cfg.wants("bands")) {
            io::write_file(join_path(cfg.output_dir, "curve" + ext), curve_text(curve, meta, cfg.format));
        }
        if (cfg.wants("report")) {
            io::write_file(join_path(cfg.output_dir, "report.json"), io::report_to_json(report, meta).dump(2) + "\n");
        }
        if (cfg.wants("svg")) {
            auto overlay = analytic_overlay(cfg.noise, grid, cfg.omega0);
            io::write_file(join_path(cfg.output_dir, "curve.svg"),
                           svg::render(curve_plot("Dephasing factor, " + std::string(to_string(cfg.noise.kind)),
                                                  curve, overlay, meta)));
        }
        if (cfg.wants("spectrum")) {
            SpectrumEstimate est =
                ensemble ? periodogram(*ensemble, cfg.transient_cut, cfg.window, std::nullopt, cfg.threads)
                         : simulate_periodogram(cfg.noise, grid, cfg.seed, cfg.n_realizations, cfg.transient_cut,
                                                cfg.window, std::nullopt, cfg.threads);
            require_finite(est.s_values, "spectrum");
            io::write_file(join_path(cfg.output_dir, "spectrum" + ext), spectrum_text(est, meta, cfg.format));
        }
        if (cfg.wants("autocorr")) {
            AutocorrEstimate ac = autocorr_estimate(*ensemble, cfg.max_lag, cfg.transient_cut);
            require_finite(ac.values, "autocorrelation");
            std::string text = cfg.format == "json" ? io::autocorr_to_json(ac, meta).dump(2) + "\n" : [&] {
                std::ostringstream os;
                io::write_autocorr_csv(os, ac, meta);
                return os.str();
            }();
            io::write_file(join_path(cfg.output_dir, "autocorr" + ext), text);
        }
        if (cfg.wants("ensemble")) {
            std::ostringstream os;
            io::write_ensemble_csv(os, *ensemble, meta);
            io::write_file(join_path(cfg.output_dir, "ensemble.csv"), os.str());
            io::write_file(join_path(cfg.output_dir, "ensemble.json"),
                           io::ensemble_metadata(*ensemble, meta).dump(2) + "\n");
        }
        out << "kind=" << to_string(cfg.noise.kind) << " N=" << curve.n_realizations
            << " verdict=" << to_string(report.verdict) << " nm_measure=" << io::format_double(report.nm_measure)
            << " revivals=" << report.revivals.size() << '\n';
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::runtime_error &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

int cmd_figure(std::string_view name, const FigureOptions &opts, std::ostream &out, std::ostream &err) {
    const FigureDef *fig = find_figure(name);
    if (!fig) {
        err << "unknown figure '" << name << "'; valid names: " << figure_name_list() << '\n';
        return kExitConfig;
    }
    try {
        FigureResult res = run_figure(*fig, opts);
        out << res.summary << '\n';
        for (const auto &f : res.files) {
            out << "  wrote " << f << '\n';
        }
        return kExitOk;
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

int cmd_validate(std::string_view suite, std::uint64_t seed, int threads, std::ostream &out, std::ostream &err) {
    std::vector<std::string> suites;
    if (suite == "all") {
        suites = validation_suite_names();
    } else {
        const auto &names = validation_suite_names();
        if (std::find(names.begin(), names.end(), suite) == names.end()) {
            err << "unknown suite '" << suite << "'; valid suites: oracles, spectra, statistics, all\n";
            return kExitConfig;
        }
        suites.emplace_back(suite);
    }
    bool all_ok = true;
    for (const auto &s : suites) {
        for (const CheckResult &r : run_validation_suite(s, seed, threads)) {
            out << (r.passed ? "PASS " : "FAIL ") << s << '/' << r.name << ": " << r.detail << '\n';
            all_ok = all_ok && r.passed;
        }
    }
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_tabulate(const TabulateRequest &req, std::ostream &out, std::ostream &err) {
    try {
        if (req.points < 2 || !(req.x_max > req.x_min)) {
            throw ConfigError("tabulate.range", "need points >= 2 and x_max > x_min");
        }
        std::vector<double> x(req.points);
        for (std::size_t k = 0; k < req.points; ++k) {
            x[k] = k + 1 == req.points ? req.x_max
                                       : req.x_min + (req.x_max - req.x_min) * static_cast<double>(k) /
                                                         static_cast<double>(req.points - 1);
        }
        std::vector<double> y = analytic::tabulate(req.formula, req.params, x);
        io::Provenance meta;
        meta.emplace_back("formula", std::string(analytic::to_string(req.formula)));
        if (req.params.gamma) meta.emplace_back("gamma", io::format_double(*req.params.gamma));
        if (req.params.sigma) meta.emplace_back("sigma", io::format_double(*req.params.sigma));
        if (req.params.kappa) meta.emplace_back("kappa", io::format_double(*req.params.kappa));
        meta.emplace_back("omega0", io::format_double(req.params.omega0));
        bool spectral = analytic::is_spectral(req.formula);
        bool lag = req.formula == analytic::Formula::corr_ou || req.formula == analytic::Formula::corr_rtn ||
                   req.formula == analytic::Formula::corr_y_stationary;
        out << table_text(spectral ? "omega" : lag ? "tau" : "t", spectral ? "S" : "value", x, y, meta, req.format);
        return kExitOk;
    } catch (const std::invalid_argument &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace qdeph
