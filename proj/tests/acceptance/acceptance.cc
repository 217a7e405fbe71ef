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

// Acceptance checks. Each criterion prints one PASS or FAIL line; the exit
// status is 0 only when every requested criterion passes.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qdeph/analytic.h"
#include "qdeph/app.h"
#include "qdeph/dephasing.h"
#include "qdeph/nm_analysis.h"
#include "qdeph/noise.h"
#include "qdeph/rng.h"
#include "qdeph/spectral.h"

using namespace qdeph;
namespace an = qdeph::analytic;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20260417;

struct Outcome {
    bool passed;
    std::string detail;
};

template <class... Args>
std::string fmt(Args &&...args) {
    std::ostringstream os;
    os.precision(6);
    (os << ... << args);
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// First zero of cos(v t) + (g / v) sin(v t), v = sqrt(4 w0^2 - g^2), by
// bisection on [0, pi / v].
double rtn_first_minimum(double g, double w0) {
    double v = std::sqrt(4 * w0 * w0 - g * g);
    auto f = [&](double t) { return std::cos(v * t) + g / v * std::sin(v * t); };
    double lo = 0.0, hi = std::numbers::pi / v;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double within_fraction(const DephasingCurve &c, const std::function<double(double)> &ref, double z) {
    std::size_t ok = 0;
    for (std::size_t k = 0; k < c.grid.size(); ++k) {
        ok += std::abs(c.d_values[k] - ref(c.grid.time(k))) <= z * (*c.std_err)[k];
    }
    return static_cast<double>(ok) / static_cast<double>(c.grid.size());
}

DephasingCurve fig_curve(const NoiseSpec &spec, std::size_t n, std::uint64_t seed, int threads) {
    return simulate_curve(spec, TimeGrid::with_default_substeps(40.0, 201, spec), 1.0, n, seed, threads);
}

Outcome criterion1(int threads) {
    auto t0 = std::chrono::steady_clock::now();
    DephasingCurve c = fig_curve(NoiseSpec::ou(0.1, 0.63), 100000, kSeed, threads);
    double secs = seconds_since(t0);
    double f = within_fraction(c, [](double t) { return an::d_ou(t, 0.1, 0.63, 1.0); }, 4.0);
    Verdict v = detect_revivals(c, 3.0).verdict;
    return {f >= 0.99 && v == Verdict::markovian && secs < 60.0,
            fmt("within 4 se at ", 100 * f, "% of points, verdict ", to_string(v), ", ", secs, " s")};
}

Outcome criterion2(int threads) {
    auto t0 = std::chrono::steady_clock::now();
    DephasingCurve c = fig_curve(NoiseSpec::rtn(0.1), 100000, kSeed + 1, threads);
    double secs = seconds_since(t0);
    double f = within_fraction(c, [](double t) { return an::d_rtn(t, 0.1, 1.0); }, 4.0);
    RevivalReport r = detect_revivals(c, 3.0);
    double target = rtn_first_minimum(0.1, 1.0);
    double onset = r.revivals.empty() ? -1.0 : r.revivals.front().t_start;
    bool onset_ok = !r.revivals.empty() && std::abs(onset - target) <= c.grid.dt() + 1e-12;
    return {f >= 0.99 && r.revivals.size() >= 3 && onset_ok && secs < 60.0,
            fmt("within 4 se at ", 100 * f, "% of points, ", r.revivals.size(), " revivals, first onset ", onset,
                " vs root ", target, " (grid step ", c.grid.dt(), "), ", secs, " s")};
}

Outcome criterion3(int threads) {
    DephasingCurve c = fig_curve(NoiseSpec::filtered_ou(0.1, 0.63, 1.0), 100000, kSeed + 2, threads);
    double f = within_fraction(c, [](double t) { return an::d_y(t, 0.1, 0.63, 1.0, 1.0); }, 4.0);
    RevivalReport r = detect_revivals(c, 3.0);
    std::string flagged;
    for (const Revival &rv : r.revivals) {
        flagged += fmt(" [", rv.t_start, ", ", rv.t_end, "] rise ", rv.depth, " vs se ", (*c.std_err)[rv.i_end], ";");
    }
    return {f >= 0.99 && r.verdict == Verdict::markovian,
            fmt("within 4 se at ", 100 * f, "% of points, verdict ", to_string(r.verdict), flagged)};
}

Outcome criterion4(int threads) {
    int mu1_markov = 0, mu05_nm = 0;
    double max_rise = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        DephasingCurve a = fig_curve(NoiseSpec::filtered_rtn(0.1, 1.0), 10000, derive_key(kSeed + 3, s), threads);
        DephasingCurve b = fig_curve(NoiseSpec::filtered_rtn(0.1, 0.5), 10000, derive_key(kSeed + 4, s), threads);
        mu1_markov += detect_revivals(a, 3.0).verdict == Verdict::markovian;
        mu05_nm += detect_revivals(b, 3.0).verdict == Verdict::non_markovian;
        for (const Swing &sw : significant_rises(b.d_values, {}, 3.0, 0.0)) max_rise = std::max(max_rise, sw.rise);
    }
    return {mu1_markov == 10 && mu05_nm == 10,
            fmt("mu=1 Markovian in ", mu1_markov, "/10 seeds, mu=0.5 NonMarkovian in ", mu05_nm,
                "/10 seeds (largest raw rise at mu=0.5: ", max_rise, ")")};
}

Outcome criterion5(int threads) {
    const double g = 0.1, k = 1.0, s = 0.63;
    NoiseSpec y = NoiseSpec::filtered_ou(g, s, k);
    SpectrumEstimate est = simulate_periodogram(y, TimeGrid::with_default_substeps(800.0, 8001, y), kSeed + 5, 2000,
                                                40.0, Window::hann, 5.0, threads);
    double worst = 0.0;
    for (std::size_t i = 0; i < est.omegas.size(); ++i) {
        double w = est.omegas[i];
        if (w < 0.05 || w > 5.0) continue;
        double truth = an::spectrum_y(w, g, k, s);
        worst = std::max(worst, std::abs(est.s_values[i] - truth) / truth);
    }
    double peak = peak_frequency(est, 0.1, 1.0);
    bool peak_ok = std::abs(peak - std::sqrt(g * k)) <= est.bin_width;

    NoiseSpec z = NoiseSpec::filtered_rtn(0.5, 0.5);
    SpectrumEstimate ez = simulate_periodogram(z, TimeGrid::with_default_substeps(400.0, 4001, z), kSeed + 6, 1000,
                                               40.0, Window::hann, std::nullopt, threads);
    SpectrumEstimate smooth = log_band_average(ez, ez.bin_width, 1.1);
    std::size_t peaks = count_significant_peaks(smooth, 3.0);
    double z_peak = peak_frequency(ez, 0.05, 3.0);
    bool dip = true;
    for (std::size_t i = 1; i < smooth.omegas.size() && smooth.omegas[i] <= z_peak; ++i) {
        dip = dip && smooth.s_values[0] < smooth.s_values[i];
    }
    return {worst <= 0.15 && peak_ok && dip && peaks == 1,
            fmt("FilteredOU max rel err ", worst, " on [0.05,5], peak ", peak, " vs ", std::sqrt(g * k), " (bin ",
                est.bin_width, "); FilteredRTN S(0) minimum ", dip ? "yes" : "no", ", peaks per side ", peaks, " at ", z_peak)};
}

Outcome criterion6(int threads) {
    NoiseSpec ou = NoiseSpec::ou(0.1, 0.63);
    TimeGrid grid = TimeGrid::with_default_substeps(40.0, 201, ou);
    DephasingCurve c = curve_ensemble_stats(ou, grid, 1.0, 100, 100, kSeed + 7, threads);
    std::size_t inside = 0;
    double first_out = -1.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double d = an::d_ou(grid.time(k), 0.1, 0.63, 1.0);
        bool in = d >= c.bands->lo2[k] && d <= c.bands->hi2[k];
        inside += in;
        if (!in && first_out < 0) first_out = grid.time(k);
    }
    double f = static_cast<double>(inside) / static_cast<double>(grid.size());
    return {f >= 0.90, fmt("closed form inside the 2-sigma band at ", 100 * f, "% of points (first miss at t=",
                           first_out, ")")};
}

Outcome criterion7() {
    double cont_rtn = 0, cont_y = 0, zero_limit = 0;
    bool unit = true;
    for (double t = 0.0; t <= 40.0; t += 0.01) {
        double c = an::d_rtn(t, 2.0, 1.0);
        cont_rtn = std::max({cont_rtn, std::abs(an::d_rtn(t, 2.0 * (1 + 1e-9), 1.0) - c),
                             std::abs(an::d_rtn(t, 2.0 * (1 - 1e-9), 1.0) - c)});
        double cy = an::d_y(t, 1.0, 0.63, 1.0, 1.0);
        cont_y = std::max({cont_y, std::abs(an::d_y(t, 1.0 + 1e-9, 0.63, 1.0, 1.0) - cy),
                           std::abs(an::d_y(t, 1.0 - 1e-9, 0.63, 1.0, 1.0) - cy)});
    }
    for (double t = 0.0; t <= 50.0; t += 1e-3) {
        zero_limit = std::max(zero_limit, std::abs(an::d_rtn(t, 0.0, 1.0) - std::abs(std::cos(2.0 * t))));
    }
    PathRng rng(kSeed, 0);
    for (int i = 0; i < 1000; ++i) {
        double g = 1e-3 + 10 * rng.uniform(), s = 5 * rng.uniform(), k = 1e-3 + 10 * rng.uniform();
        double w = 1e-2 + 5 * rng.uniform();
        unit = unit && an::d_ou(0.0, g, s, w) == 1.0 && an::d_rtn(0.0, g, w) == 1.0 && an::d_y(0.0, g, s, k, w) == 1.0;
    }
    return {cont_rtn <= 1e-8 && cont_y <= 1e-8 && unit && zero_limit <= 1e-10,
            fmt("d_rtn jump ", cont_rtn, ", d_y jump ", cont_y, ", unit at t=0 ", unit ? "yes" : "no",
                ", zero-rate deviation ", zero_limit)};
}

Outcome criterion8(int threads) {
    double worst = 0.0;
    std::uint64_t s = 0;
    for (const NoiseSpec &spec : {NoiseSpec::ou(0.1, 0.63), NoiseSpec::rtn(0.1), NoiseSpec::filtered_ou(0.1, 0.63, 1.0),
                                  NoiseSpec::filtered_rtn(0.1, 0.5)}) {
        DephasingCurve c = fig_curve(spec, 1000, derive_key(kSeed + 8, s++), threads);
        for (std::size_t k = 0; k < c.grid.size(); ++k) {
            double td = trace_distance(evolve_state(QubitState::plus(), c, k), evolve_state(QubitState::minus(), c, k));
            worst = std::max(worst, std::abs(td - c.d_values[k]));
        }
    }
    return {worst <= 1e-12, fmt("max |TD(+,-) - D| over four kinds: ", worst)};
}

Outcome criterion9(int threads) {
    int fp = 0, tp = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        fp += detect_revivals(fig_curve(NoiseSpec::ou(0.1, 0.63), 10000, derive_key(kSeed + 9, i), threads), 3.0)
                  .verdict == Verdict::non_markovian;
        tp += detect_revivals(fig_curve(NoiseSpec::rtn(0.1), 10000, derive_key(kSeed + 10, i), threads), 3.0)
                  .verdict == Verdict::non_markovian;
    }
    return {fp <= 5 && tp >= 95, fmt("OU false positives ", fp, "/100, RTN true positives ", tp, "/100")};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion10(const std::string &scratch) {
    fs::path root = fs::path(scratch) / "determinism";
    fs::remove_all(root);
    std::size_t compared = 0;
    std::vector<std::string> mismatched;
    for (const FigureDef &fig : figure_defs()) {
        std::vector<std::vector<std::string>> files(2);
        for (int run = 0; run < 2; ++run) {
            FigureOptions o;
            o.seed = 7;
            o.threads = run == 0 ? 1 : 4;
            o.out_dir = (root / (run == 0 ? "t1" : "t4")).string();
            files[run] = run_figure(fig, o).files;
        }
        for (std::size_t i = 0; i < files[0].size(); ++i) {
            if (fs::path(files[0][i]).extension() != ".csv") continue;
            ++compared;
            if (slurp(files[0][i]) != slurp(files[1][i])) mismatched.push_back(files[0][i]);
        }
    }
    fs::remove_all(root);
    return {mismatched.empty() && compared > 0,
            fmt(compared, " CSV files compared between 1 and 4 threads, ", mismatched.size(), " differ")};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> criteria;
    int threads = 1;
    std::string scratch = fs::temp_directory_path().string();
    app.add_option("--criterion", criteria, "Criterion numbers (default: all)")->check(CLI::Range(1, 10));
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--scratch", scratch, "Directory for temporary figure output");
    CLI11_PARSE(app, argc, argv);
    if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    bool all = true;
    for (int n : criteria) {
        Outcome o{false, ""};
        try {
            switch (n) {
                case 1: o = criterion1(threads); break;
                case 2: o = criterion2(threads); break;
                case 3: o = criterion3(threads); break;
                case 4: o = criterion4(threads); break;
                case 5: o = criterion5(threads); break;
                case 6: o = criterion6(threads); break;
                case 7: o = criterion7(); break;
                case 8: o = criterion8(threads); break;
                case 9: o = criterion9(threads); break;
                case 10: o = criterion10(scratch); break;
            }
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << n << ": " << o.detail << std::endl;
        all = all && o.passed;
    }
    return all ? 0 : 1;
}
