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
#include <stdexcept>

#include "qdeph/noise.h"

using namespace qdeph;

namespace {

// Mean and standard error of f(path) over the ensemble.
template <class F>
std::pair<double, double> ensemble_mean(const TrajectoryEnsemble &e, F f) {
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < e.n_paths; ++i) {
        double v = f(e.row(i));
        s += v;
        s2 += v * v;
    }
    double n = static_cast<double>(e.n_paths);
    double m = s / n;
    return {m, std::sqrt((s2 / n - m * m) / n)};
}

}  // namespace

TEST_CASE("NoiseSpec validation names the offending field") {
    CHECK_THROWS_WITH_AS(NoiseSpec::ou(0.1, -1.0).validate(), doctest::Contains("noise.sigma"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(NoiseSpec::ou(0.0, 1.0).validate(), doctest::Contains("noise.gamma"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(NoiseSpec::filtered_ou(0.1, 1.0, 0.0).validate(), doctest::Contains("noise.kappa"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(NoiseSpec::filtered_rtn(0.1, -2.0).validate(), doctest::Contains("noise.mu"),
                         std::invalid_argument);
    CHECK_NOTHROW(NoiseSpec::rtn(0.0).validate());
    CHECK_THROWS_AS(TimeGrid(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(1.0, 1), std::invalid_argument);
}

TEST_CASE("zero-amplitude OU stays at zero") {
    TimeGrid grid(10.0, 51, 4);
    TrajectoryEnsemble e = sample(NoiseSpec::ou(0.1, 0.0), grid, 5, 10);
    for (double v : e.values) REQUIRE(v == 0.0);
    for (double v : e.integrals) REQUIRE(v == 0.0);
    TrajectoryEnsemble y = sample(NoiseSpec::filtered_ou(0.1, 0.0, 1.0), grid, 5, 10);
    for (double v : y.values) REQUIRE(v == 0.0);
}

TEST_CASE("OU stationary variance and lagged correlation") {
    const double g = 0.1, s = 0.63;
    TimeGrid grid(60.0, 61);
    TrajectoryEnsemble e = sample(NoiseSpec::ou(g, s), grid, 11, 100000);
    auto [var, var_se] = ensemble_mean(e, [](auto r) { return r[60] * r[60]; });
    CHECK(std::abs(var - s * s / (2 * g)) < 3 * var_se);
    auto [lag, lag_se] = ensemble_mean(e, [](auto r) { return r[50] * r[60]; });
    CHECK(std::abs(lag - s * s / (2 * g) * std::exp(-g * 10.0)) < 4 * lag_se);
}

TEST_CASE("RTN switch count and correlation") {
    const double g = 0.1, T = 50.0;
    double count = 0, count2 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double c = static_cast<double>(sample_telegraph_path(g, T, 9, i).switch_times.size());
        count += c;
        count2 += c * c;
    }
    double m = count / n;
    double se = std::sqrt((count2 / n - m * m) / n);
    CHECK(std::abs(m - g * T) < 3 * se);

    TimeGrid grid(T, 51);
    TrajectoryEnsemble e = sample(NoiseSpec::rtn(g), grid, 9, 20000);
    auto [c, c_se] = ensemble_mean(e, [](auto r) { return r[10] * r[15]; });
    CHECK(std::abs(c - std::exp(-2 * g * 5.0)) < 4 * c_se);
    for (double v : e.values) REQUIRE(std::abs(v) == 1.0);
}

TEST_CASE("RTN with zero rate is constant") {
    TimeGrid grid(20.0, 21);
    TrajectoryEnsemble e = sample(NoiseSpec::rtn(0.0), grid, 3, 50);
    for (std::size_t i = 0; i < e.n_paths; ++i) {
        auto r = e.row(i);
        for (double v : r) REQUIRE(v == r[0]);
        CHECK(e.integral_row(i)[20] == doctest::Approx(20.0 * r[0]));
    }
}

TEST_CASE("telegraph integration follows the hand-integrated path") {
    TelegraphPath p{1.0, {2.5}};
    TimeGrid grid(5.0, 11);
    std::vector<double> v(11), x(11);
    integrate_telegraph(p, grid, v, x);
    for (std::size_t k = 0; k < 11; ++k) {
        double t = grid.time(k);
        CHECK(x[k] == doctest::Approx(t <= 2.5 ? t : 5.0 - t).epsilon(1e-14));
        CHECK(v[k] == (t < 2.5 ? 1.0 : -1.0));
    }
}

TEST_CASE("ensembles are identical across worker counts") {
    TimeGrid grid(10.0, 41, 3);
    for (const NoiseSpec &spec : {NoiseSpec::ou(0.5, 1.0), NoiseSpec::rtn(0.5), NoiseSpec::filtered_ou(0.5, 1.0, 2.0),
                                  NoiseSpec::filtered_rtn(0.5, 0.5)}) {
        TrajectoryEnsemble a = sample(spec, grid, 77, 600, 1);
        TrajectoryEnsemble b = sample(spec, grid, 77, 600, 4);
        CHECK(a.values == b.values);
        CHECK(a.integrals == b.integrals);
    }
}

TEST_CASE("path i does not depend on ensemble size") {
    TimeGrid grid(10.0, 41);
    TrajectoryEnsemble a = sample(NoiseSpec::filtered_ou(0.5, 1.0, 2.0), grid, 5, 10);
    TrajectoryEnsemble b = sample(NoiseSpec::filtered_ou(0.5, 1.0, 2.0), grid, 5, 300);
    for (std::size_t k = 0; k < 41; ++k) CHECK(a.row(9)[k] == b.row(9)[k]);
}

TEST_CASE("filtered processes start at zero and filtered RTN is bounded") {
    TimeGrid grid(30.0, 301);
    TrajectoryEnsemble z = sample(NoiseSpec::filtered_rtn(0.5, 0.5), grid, 8, 200);
    for (std::size_t i = 0; i < z.n_paths; ++i) {
        CHECK(z.row(i)[0] == 0.0);
        for (double v : z.row(i)) REQUIRE(std::abs(v) <= 1.0 / 0.5 + 1e-12);
    }
    TrajectoryEnsemble y = sample(NoiseSpec::filtered_ou(0.5, 1.0, 2.0), grid, 8, 20);
    for (std::size_t i = 0; i < y.n_paths; ++i) CHECK(y.row(i)[0] == 0.0);
}

TEST_CASE("FilteredOU stationary variance") {
    const double g = 0.5, s = 1.0, k = 2.0;
    TimeGrid grid(40.0, 41);
    TrajectoryEnsemble y = sample(NoiseSpec::filtered_ou(g, s, k), grid, 21, 50000);
    auto [var, se] = ensemble_mean(y, [](auto r) { return r[40] * r[40]; });
    // Integral of the spectrum s^2/(2 pi) w^2/((g^2+w^2)(k^2+w^2)).
    double truth = s * s / (2.0 * (g + k));
    CHECK(std::abs(var - truth) < 4 * se);
}

TEST_CASE("coarse grids produce warnings") {
    NoiseSpec y = NoiseSpec::filtered_ou(0.1, 1.0, 1.0);
    TimeGrid coarse(40.0, 11, 1);
    CHECK_FALSE(grid_warnings(y, coarse).empty());
    CHECK(grid_warnings(y, TimeGrid::with_default_substeps(40.0, 11, y)).empty());
    CHECK(TimeGrid::with_default_substeps(40.0, 11, y).h() * y.max_rate() <= 0.05 + 1e-12);
}
