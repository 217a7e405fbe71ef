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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qdeph/analytic.h"
#include "qdeph/noise.h"
#include "qdeph/rng.h"
#include "qdeph/spectral.h"

using namespace qdeph;

TEST_CASE("window parsing") {
    CHECK(parse_window("hann") == Window::hann);
    CHECK(parse_window("rectangular") == Window::rectangular);
    CHECK_THROWS_WITH_AS(parse_window("kaiser"), doctest::Contains("spectrum.window"), std::invalid_argument);
}

TEST_CASE("autocorrelation of simple ensembles") {
    TimeGrid grid(50.0, 501);
    TrajectoryEnsemble zero;
    zero.grid = grid;
    zero.n_paths = 3;
    zero.values.assign(3 * grid.size(), 0.0);
    AutocorrEstimate z = autocorr_estimate(zero, 10.0, 5.0);
    for (double v : z.values) CHECK(v == 0.0);

    TrajectoryEnsemble rtn = sample(NoiseSpec::rtn(0.1), grid, 4, 200);
    AutocorrEstimate r = autocorr_estimate(rtn, 10.0, 5.0);
    CHECK(r.values[0] == 1.0);
    CHECK(r.taus[0] == 0.0);
}

TEST_CASE("OU autocorrelation decays at the OU rate") {
    const double g = 0.1, s = 0.63;
    NoiseSpec ou = NoiseSpec::ou(g, s);
    TimeGrid grid(400.0, 4001);
    AutocorrEstimate a = autocorr_estimate(sample(ou, grid, 12, 400), 10.0, 100.0);
    // Least-squares slope of log C(tau).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < a.taus.size(); ++i) {
        if (a.values[i] <= 0) continue;
        double x = a.taus[i], y = std::log(a.values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(-slope == doctest::Approx(g).epsilon(0.1));
    CHECK(a.values[0] == doctest::Approx(s * s / (2 * g)).epsilon(0.1));
}

TEST_CASE("periodogram of a pure tone concentrates at the tone") {
    TimeGrid grid(100.0, 1001);
    TrajectoryEnsemble e;
    e.grid = grid;
    e.n_paths = 1;
    const double w = 2 * std::numbers::pi * 50.0 / (grid.dt() * 900.0);
    for (double t : grid.times()) e.values.push_back(std::cos(w * (t - 10.0)));
    SpectrumEstimate est = periodogram(e, 10.0, Window::rectangular);
    CHECK(est.segment_length == 901);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < est.omegas.size(); ++i) {
        if (est.s_values[i] > est.s_values[arg]) arg = i;
    }
    CHECK(std::abs(est.omegas[arg] - w) <= est.bin_width);
    CHECK(spectrum_integral(est) == doctest::Approx(est.sample_variance).epsilon(1e-9));
}

TEST_CASE("FilteredOU periodogram follows the rational spectrum") {
    const double g = 0.1, k = 1.0, s = 0.63;
    NoiseSpec y = NoiseSpec::filtered_ou(g, s, k);
    TimeGrid grid = TimeGrid::with_default_substeps(400.0, 4001, y);
    SpectrumEstimate est = simulate_periodogram(y, grid, 31, 300, 40.0, Window::hann, 5.0, 2);
    SpectrumEstimate band = log_band_average(est, 0.1, 1.2);
    for (std::size_t i = 1; i < band.omegas.size() && band.omegas[i] <= 5.0; ++i) {
        double truth = analytic::spectrum_y(band.omegas[i], g, k, s);
        CHECK(std::abs(band.s_values[i] - truth) < 4 * band.std_err[i] + 0.05 * truth);
    }
    CHECK(peak_frequency(est, 0.1, 1.0) == doctest::Approx(std::sqrt(g * k)).epsilon(0.1));
    SpectrumEstimate twice = simulate_periodogram(y, grid, 31, 300, 40.0, Window::hann, 5.0, 1);
    CHECK(twice.s_values == est.s_values);
}

TEST_CASE("FilteredRTN spectrum has a dip and one peak per side") {
    NoiseSpec z = NoiseSpec::filtered_rtn(0.5, 0.5);
    TimeGrid grid = TimeGrid::with_default_substeps(400.0, 4001, z);
    SpectrumEstimate est = simulate_periodogram(z, grid, 5, 500, 40.0);
    SpectrumEstimate smooth = log_band_average(est, est.bin_width, 1.1);
    CHECK(count_significant_peaks(smooth, 3.0) == 1);
    double p1 = peak_frequency(est, 0.05, 3.0);
    double p2 = peak_frequency(simulate_periodogram(z, grid, 5, 1000, 40.0), 0.05, 3.0);
    CHECK(p2 == doctest::Approx(p1).epsilon(0.1));
    CHECK(smooth.s_values[0] < smooth.s_values[1]);
}

TEST_CASE("periodogram argument checks") {
    NoiseSpec y = NoiseSpec::filtered_ou(0.1, 0.63, 1.0);
    TimeGrid grid(100.0, 101);
    TrajectoryEnsemble e = sample(y, grid, 1, 4);
    CHECK_THROWS_AS(periodogram(e, 99.0), std::invalid_argument);
    CHECK_THROWS_AS(periodogram(e, 10.0, Window::hann, 1e6), std::invalid_argument);
    CHECK(default_transient_cut(y) == doctest::Approx(100.0));
}
