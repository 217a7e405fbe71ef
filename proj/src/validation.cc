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

#include "qdeph/validation.h"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qdeph/analytic.h"
#include "qdeph/dephasing.h"
#include "qdeph/nm_analysis.h"
#include "qdeph/noise.h"
#include "qdeph/rng.h"
#include "qdeph/spectral.h"

namespace qdeph {

namespace {

namespace an = analytic;

template <class... Args>
std::string fmt(Args &&...args) {
    std::ostringstream os;
    os.precision(6);
    (os << ... << args);
    return os.str();
}

CheckResult check(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok, std::move(detail)};
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return x;
}

// Fraction of grid points where the curve lies within `z` standard errors
// of the reference values.
double agreement_fraction(const DephasingCurve &c, const std::vector<double> &ref, double z) {
    std::size_t ok = 0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        if (std::abs(c.d_values[k] - ref[k]) <= z * (*c.std_err)[k] + 1e-15) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(ref.size());
}

// (1/pi) int_0^inf C(tau) cos(w tau) dtau by composite Gauss-Legendre.
double cosine_transform(double omega, double gamma, double kappa, double sigma) {
    using boost::math::quadrature::gauss;
    double upper = 80.0 / std::min(gamma, kappa);
    double width = std::min(0.5 / std::max(gamma, kappa), omega > 0 ? 1.0 / omega : 1.0);
    std::size_t panels = static_cast<std::size_t>(std::ceil(upper / width));
    width = upper / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        double lo = width * static_cast<double>(p);
        sum += gauss<double, 20>::integrate(
            [&](double tau) { return an::corr_y_stationary(tau, gamma, kappa, sigma) * std::cos(omega * tau); }, lo,
            lo + width);
    }
    return sum / std::numbers::pi;
}

std::vector<CheckResult> oracle_suite() {
    std::vector<CheckResult> out;
    auto ts = linspace(0.0, 30.0, 3001);

    {
        double worst = 0.0;
        for (double t : ts) {
            double c = an::d_rtn(t, 2.0, 1.0);
            worst = std::max({worst, std::abs(an::d_rtn(t, 2.0 * (1 + 1e-9), 1.0) - c),
                              std::abs(an::d_rtn(t, 2.0 * (1 - 1e-9), 1.0) - c)});
        }
        out.push_back(check("d_rtn_branch_continuity", worst <= 1e-8, fmt("max jump ", worst, " (limit 1e-8)")));
    }
    {
        double worst = 0.0;
        double kappa = 1.0;
        // Straddle both gamma = kappa and the closed-form/series switch.
        double r = an::kDegenerateRateThreshold;
        double g_switch = kappa * (1 - r) / (1 + r);
        for (double t : ts) {
            double c = an::d_y(t, kappa, 0.63, kappa, 1.0);
            worst = std::max({worst, std::abs(an::d_y(t, kappa * (1 + 1e-9), 0.63, kappa, 1.0) - c),
                              std::abs(an::d_y(t, kappa * (1 - 1e-9), 0.63, kappa, 1.0) - c),
                              std::abs(an::d_y(t, g_switch * (1 + 1e-9), 0.63, kappa, 1.0) -
                                       an::d_y(t, g_switch * (1 - 1e-9), 0.63, kappa, 1.0))});
        }
        out.push_back(check("d_y_degenerate_continuity", worst <= 1e-8, fmt("max jump ", worst, " (limit 1e-8)")));
    }
    {
        bool ok = true;
        PathRng rng(0x5eed, 0);
        for (int i = 0; i < 200; ++i) {
            double g = 0.01 + 5 * rng.uniform(), s = 3 * rng.uniform(), k = 0.01 + 5 * rng.uniform();
            double w = 0.1 + 3 * rng.uniform();
            ok = ok && an::d_ou(0, g, s, w) == 1.0 && an::d_rtn(0, g, w) == 1.0 && an::d_y(0, g, s, k, w) == 1.0;
        }
        out.push_back(check("unit_at_t0", ok, "d_ou(0) = d_rtn(0) = d_y(0) = 1 over 200 random parameter sets"));
    }
    {
        double worst = 0.0;
        for (double t : linspace(0.0, 50.0, 100001)) {
            worst = std::max(worst, std::abs(an::d_rtn(t, 0.0, 1.0) - std::abs(std::cos(2.0 * t))));
        }
        out.push_back(check("rtn_zero_rate_limit", worst <= 1e-10, fmt("max deviation ", worst, " (limit 1e-10)")));
    }
    {
        bool ok = true;
        bool in_range = true;
        PathRng rng(0x5eed, 1);
        for (int i = 0; i < 50 && ok; ++i) {
            double g = 0.01 + 3 * rng.uniform(), s = 2 * rng.uniform(), k = 0.01 + 3 * rng.uniform();
            double prev_ou = 1.0, prev_y = 1.0;
            for (double t : linspace(0.0, 40.0, 2001)) {
                double a = an::d_ou(t, g, s, 1.0), b = an::d_y(t, g, s, k, 1.0), c = an::d_rtn(t, g, 1.0);
                ok = ok && a <= prev_ou + 1e-12 && b <= prev_y + 1e-12;
                in_range = in_range && a >= 0 && a <= 1 && b >= 0 && b <= 1 && c >= 0 && c <= 1;
                prev_ou = a;
                prev_y = b;
            }
        }
        out.push_back(check("d_ou_d_y_monotone", ok, "finite differences <= 1e-12 over 50 random parameter sets"));
        out.push_back(check("dephasing_range", in_range, "all dephasing factors in [0, 1]"));
    }
    {
        double worst = 0.0;
        double g = 0.1, k = 1.0, s = 0.63;
        for (double w : linspace(0.0, 20.0 * std::max(g, k), 81)) {
            worst = std::max(worst, std::abs(cosine_transform(w, g, k, s) - an::spectrum_y(w, g, k, s)));
        }
        out.push_back(check("wiener_khinchin", worst <= 1e-6,
                            fmt("max |FT[C_stat] - S| = ", worst, " on [0, 20 max(gamma, kappa)] (limit 1e-6)")));
    }
    {
        double worst_sym = 0.0, worst_lim = 0.0;
        PathRng rng(0x5eed, 2);
        for (int i = 0; i < 200; ++i) {
            double t = 50 * rng.uniform(), s = 50 * rng.uniform();
            worst_sym = std::max(worst_sym, std::abs(an::corr_y(t, s, 0.1, 1.0, 0.63) - an::corr_y(s, t, 0.1, 1.0, 0.63)));
        }
        for (double tau : linspace(0.0, 20.0, 41)) {
            worst_lim = std::max(worst_lim, std::abs(an::corr_y(500.0 + tau, 500.0, 0.1, 1.0, 0.63) -
                                                     an::corr_y_stationary(tau, 0.1, 1.0, 0.63)));
        }
        out.push_back(check("corr_y_symmetry", worst_sym <= 1e-14, fmt("max asymmetry ", worst_sym)));
        out.push_back(check("corr_y_stationary_limit", worst_lim <= 1e-12, fmt("max deviation at t=500: ", worst_lim)));
    }
    {
        double worst = 0.0;
        for (double k : {0.3, 1.0, 2.5}) {
            double gs = k * (1 - an::kDegenerateRateThreshold) / (1 + an::kDegenerateRateThreshold);
            for (double t : linspace(0.0, 30.0, 31)) {
                for (double s : {0.0, 1.0, 7.5, 30.0}) {
                    worst = std::max(worst, std::abs(an::corr_y(t, s, gs * (1 + 1e-9), k, 1.0) -
                                                     an::corr_y(t, s, gs * (1 - 1e-9), k, 1.0)));
                }
            }
        }
        out.push_back(check("corr_y_branch_continuity", worst <= 1e-8, fmt("max jump ", worst, " (limit 1e-8)")));
    }
    {
        double g = 0.1, k = 1.0, s = 0.63;
        double best_w = 0, best = -1;
        for (double w : linspace(0.0, 2.0, 200001)) {
            double v = an::spectrum_y(w, g, k, s);
            if (v > best) {
                best = v;
                best_w = w;
            }
        }
        double tail = an::spectrum_y(1e6, g, k, s) * 1e12 / (s * s / (2 * std::numbers::pi));
        out.push_back(check("spectrum_y_peak", std::abs(best_w - std::sqrt(g * k)) <= 1e-5 && an::spectrum_y(0, g, k, s) == 0.0,
                            fmt("grid argmax ", best_w, " vs sqrt(gamma kappa) ", std::sqrt(g * k), "; S(0) = 0")));
        out.push_back(check("spectrum_y_tail", std::abs(tail - 1.0) <= 1e-6, fmt("S(w) w^2 / (sigma^2/2pi) at w=1e6: ", tail)));
    }
    return out;
}

std::vector<CheckResult> spectra_suite(std::uint64_t seed, int threads) {
    std::vector<CheckResult> out;
    const double g = 0.1, k = 1.0, s = 0.63;
    NoiseSpec y = NoiseSpec::filtered_ou(g, s, k);
    TimeGrid grid_y = TimeGrid::with_default_substeps(800.0, 8001, y);
    TrajectoryEnsemble ens_y = sample(y, grid_y, derive_key(seed, 1), 2000, threads);
    SpectrumEstimate est = periodogram(ens_y, 40.0, Window::hann, 5.0, threads);
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < est.omegas.size(); ++i) {
            double w = est.omegas[i];
            if (w < 0.05 || w > 5.0) continue;
            double truth = an::spectrum_y(w, g, k, s);
            worst = std::max(worst, std::abs(est.s_values[i] - truth) / truth);
        }
        out.push_back(check("filtered_ou_calibration", worst <= 0.15,
                            fmt("max relative error ", worst, " on [0.05, 5] with 2000 paths (limit 0.15)")));
    }
    {
        double peak = peak_frequency(est, 0.1, 1.0);
        double target = std::sqrt(g * k);
        out.push_back(check("filtered_ou_peak", std::abs(peak - target) <= est.bin_width,
                            fmt("peak ", peak, " vs ", target, ", bin width ", est.bin_width)));
    }
    {
        double integral = spectrum_integral(est);
        double rel = std::abs(integral - est.sample_variance) / est.sample_variance;
        out.push_back(check("parseval", rel <= 0.05,
                            fmt("integral ", integral, " vs post-cut variance ", est.sample_variance)));
    }
    {
        SpectrumEstimate later = periodogram(ens_y, 80.0, Window::hann, 5.0, threads);
        SpectrumEstimate a = log_band_average(est, 0.05, 1.05);
        SpectrumEstimate b = log_band_average(later, 0.05, 1.05);
        std::vector<double> z;
        for (std::size_t i = 1; i < std::min(a.omegas.size(), b.omegas.size()); ++i) {
            if (a.omegas[i] > 5.0) break;
            z.push_back(std::abs(a.s_values[i] - b.s_values[i]) / std::hypot(a.std_err[i], b.std_err[i]));
        }
        std::sort(z.begin(), z.end());
        double median = z.empty() ? 0.0 : z[z.size() / 2];
        out.push_back(check("transient_sensitivity", median < 1.0,
                            fmt("median |S(cut 40) - S(cut 80)| / se over ", z.size(), " bands = ", median,
                                ", max = ", z.empty() ? 0.0 : z.back())));
    }
    {
        NoiseSpec zspec = NoiseSpec::filtered_rtn(0.5, 0.5);
        TimeGrid grid = TimeGrid::with_default_substeps(400.0, 4001, zspec);
        TrajectoryEnsemble ens = sample(zspec, grid, derive_key(seed, 2), 1000, threads);
        SpectrumEstimate hann = periodogram(ens, 40.0, Window::hann, std::nullopt, threads);
        SpectrumEstimate rect = periodogram(ens, 40.0, Window::rectangular, std::nullopt, threads);
        SpectrumEstimate smooth = log_band_average(hann, hann.bin_width, 1.1);
        std::size_t peaks = count_significant_peaks(smooth, 3.0);
        double peak_h = peak_frequency(hann, 0.05, 3.0);
        double peak_r = peak_frequency(rect, 0.05, 3.0);
        bool dip = true;
        for (std::size_t i = 1; i < smooth.omegas.size() && smooth.omegas[i] <= peak_h; ++i) {
            dip = dip && smooth.s_values[0] < smooth.s_values[i];
        }
        out.push_back(check("filtered_rtn_structure", dip && peaks == 1,
                            fmt("S(0) minimum: ", dip ? "yes" : "no", ", significant peaks per side: ", peaks,
                                ", peak at ", peak_h)));
        out.push_back(check("window_peak_invariance", std::abs(peak_h - peak_r) < 0.5 * hann.bin_width,
                            fmt("hann ", peak_h, " vs rectangular ", peak_r, ", half bin ", 0.5 * hann.bin_width)));
    }
    {
        NoiseSpec ou = NoiseSpec::ou(0.1, 0.63);
        TimeGrid grid = TimeGrid::with_default_substeps(800.0, 8001, ou);
        SpectrumEstimate est_ou = simulate_periodogram(ou, grid, derive_key(seed, 3), 500, 100.0, Window::hann,
                                                       std::nullopt, threads);
        SpectrumEstimate smooth = log_band_average(est_ou, est_ou.bin_width, 1.1);
        std::vector<double> v(smooth.s_values.begin() + 1, smooth.s_values.end());
        std::vector<double> e(smooth.std_err.begin() + 1, smooth.std_err.end());
        auto rises = hysteresis_rises(v, e, 3.0, 0.0);
        out.push_back(check("ou_lorentzian_monotone", rises.empty(),
                            fmt("significant rises in the band-averaged OU spectrum: ", rises.size())));
    }
    return out;
}

std::vector<CheckResult> statistics_suite(std::uint64_t seed, int threads) {
    std::vector<CheckResult> out;
    const double w0 = 1.0;
    {
        NoiseSpec ou = NoiseSpec::ou(0.1, 0.63);
        TimeGrid grid = TimeGrid::with_default_substeps(40.0, 201, ou);
        DephasingCurve c = simulate_curve(ou, grid, w0, 100000, derive_key(seed, 10), threads);
        std::vector<double> ref;
        for (double t : grid.times()) ref.push_back(an::d_ou(t, 0.1, 0.63, w0));
        double f = agreement_fraction(c, ref, 4.0);
        out.push_back(check("ou_mc_vs_closed_form", f >= 0.99, fmt("fraction within 4 se: ", f, " (N=1e5)")));
    }
    {
        NoiseSpec rtn = NoiseSpec::rtn(0.1);
        TimeGrid grid = TimeGrid::with_default_substeps(40.0, 201, rtn);
        DephasingCurve c = simulate_curve(rtn, grid, w0, 100000, derive_key(seed, 11), threads);
        std::vector<double> ref;
        for (double t : grid.times()) ref.push_back(an::d_rtn(t, 0.1, w0));
        double f = agreement_fraction(c, ref, 4.0);
        out.push_back(check("rtn_mc_vs_closed_form", f >= 0.99, fmt("fraction within 4 se: ", f, " (N=1e5)")));
    }
    {
        NoiseSpec ou = NoiseSpec::ou(0.1, 0.63);
        TimeGrid grid = TimeGrid::with_default_substeps(40.0, 201, ou);
        int positives = 0;
        for (int i = 0; i < 100; ++i) {
            DephasingCurve c = simulate_curve(ou, grid, w0, 10000, derive_key(seed, 1000 + i), threads);
            positives += detect_revivals(c, 3.0).verdict == Verdict::non_markovian;
        }
        out.push_back(check("ou_false_positive_rate", positives <= 5,
                            fmt(positives, "/100 OU curves flagged NonMarkovian (limit 5)")));
    }
    {
        NoiseSpec rtn = NoiseSpec::rtn(0.1);
        TimeGrid grid = TimeGrid::with_default_substeps(40.0, 201, rtn);
        int positives = 0;
        for (int i = 0; i < 100; ++i) {
            DephasingCurve c = simulate_curve(rtn, grid, w0, 10000, derive_key(seed, 2000 + i), threads);
            positives += detect_revivals(c, 3.0).verdict == Verdict::non_markovian;
        }
        out.push_back(check("rtn_true_positive_rate", positives >= 95,
                            fmt(positives, "/100 RTN curves flagged NonMarkovian (limit 95)")));
    }
    {
        double worst = 0.0;
        NoiseSpec specs[] = {NoiseSpec::ou(0.1, 0.63), NoiseSpec::rtn(0.1), NoiseSpec::filtered_ou(0.1, 0.63, 1.0),
                             NoiseSpec::filtered_rtn(0.1, 0.5)};
        for (const auto &sp : specs) {
            TimeGrid grid = TimeGrid::with_default_substeps(40.0, 201, sp);
            DephasingCurve c = simulate_curve(sp, grid, w0, 1000, derive_key(seed, 20), threads);
            for (std::size_t kk = 0; kk < grid.size(); ++kk) {
                double td = trace_distance(evolve_state(QubitState::plus(), c, kk),
                                           evolve_state(QubitState::minus(), c, kk));
                worst = std::max(worst, std::abs(td - c.d_values[kk]));
            }
        }
        out.push_back(check("maximizing_pair_identity", worst <= 1e-12, fmt("max |TD - D| = ", worst)));
    }
    {
        auto excess_kurtosis = [&](const NoiseSpec &sp, std::size_t n, double &se) {
            TimeGrid grid = TimeGrid::with_default_substeps(40.0, 201, sp);
            TrajectoryEnsemble e = sample(sp, grid, derive_key(seed, 30), n, threads);
            double m2 = 0, m4 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double x = e.row(i)[grid.size() - 1];
                m2 += x * x;
                m4 += x * x * x * x;
            }
            m2 /= static_cast<double>(n);
            m4 /= static_cast<double>(n);
            se = std::sqrt(24.0 / static_cast<double>(n));
            return m4 / (m2 * m2) - 3.0;
        };
        double se_ou, se_rtn, se_y, se_z;
        double k_ou = excess_kurtosis(NoiseSpec::ou(0.1, 0.63), 100000, se_ou);
        double k_rtn = excess_kurtosis(NoiseSpec::rtn(0.1), 1000, se_rtn);
        double k_y = excess_kurtosis(NoiseSpec::filtered_ou(0.1, 0.63, 1.0), 100000, se_y);
        double k_z = excess_kurtosis(NoiseSpec::filtered_rtn(0.1, 0.5), 100000, se_z);
        bool ok = std::abs(k_ou) <= 4 * se_ou && std::abs(k_y) <= 4 * se_y && std::abs(k_rtn + 2.0) <= 1e-12 &&
                  std::abs(k_z) > 3 * se_z;
        out.push_back(check("gaussianity_split", ok,
                            fmt("excess kurtosis OU ", k_ou, ", Y ", k_y, " (se ", se_ou, "); RTN ", k_rtn, "; Z ",
                                k_z)));
    }
    {
        NoiseSpec y = NoiseSpec::filtered_ou(0.1, 0.63, 1.0);
        TimeGrid g1 = TimeGrid::with_default_substeps(40.0, 201, y);
        TimeGrid g2(40.0, 201, 2 * g1.substeps());
        DephasingCurve a = simulate_curve(y, g1, w0, 20000, derive_key(seed, 40), threads);
        DephasingCurve b = simulate_curve(y, g2, w0, 20000, derive_key(seed, 40), threads);
        double worst = 0.0;
        for (std::size_t kk = 0; kk < g1.size(); ++kk) {
            double se = std::hypot((*a.std_err)[kk], (*b.std_err)[kk]);
            if (se > 0) worst = std::max(worst, std::abs(a.d_values[kk] - b.d_values[kk]) / se);
        }
        out.push_back(check("substep_consistency", worst <= 4.0,
                            fmt("max |D(h) - D(h/2)| / combined se = ", worst, " (limit 4)")));
    }
    return out;
}

}  // namespace

const std::vector<std::string> &validation_suite_names() {
    static const std::vector<std::string> names = {"oracles", "spectra", "statistics"};
    return names;
}

std::vector<CheckResult> run_validation_suite(std::string_view suite, std::uint64_t seed, int threads) {
    if (suite == "oracles") return oracle_suite();
    if (suite == "spectra") return spectra_suite(seed, threads);
    if (suite == "statistics") return statistics_suite(seed, threads);
    throw std::invalid_argument("unknown validation suite '" + std::string(suite) + "'");
}

}  // namespace qdeph
