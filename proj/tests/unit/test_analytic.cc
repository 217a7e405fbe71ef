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

using namespace qdeph::analytic;

// Golden values below were evaluated at 40 significant digits: the OU and
// RTN closed forms directly, d_y by double quadrature of the two-time
// correlation of Y, and the RTN zero by root finding.

TEST_CASE("d_ou golden values") {
    CHECK(d_ou(1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.7144927122536721739).epsilon(1e-14));
    CHECK(d_ou(7.5, 0.1, 0.63, 1.0) == doctest::Approx(2.130143030857543282e-29).epsilon(1e-11));
    CHECK(d_ou(0.0, 0.3, 2.0, 1.5) == 1.0);
    CHECK(d_ou(5.0, 0.3, 0.0, 1.5) == 1.0);
    // Small gamma t, where the bracket cancels to leading order (gamma t)^3.
    CHECK(d_ou(1e-3, 0.5, 100.0, 1.0) == doctest::Approx(0.9999933358549556174).epsilon(1e-14));
    CHECK(d_ou(2.0, 0.01, 0.3, 1.0) == doctest::Approx(0.6232131257308641934).epsilon(1e-13));
}

TEST_CASE("d_rtn golden values on each branch") {
    CHECK(d_rtn(3.0, 0.1, 1.0) == doctest::Approx(0.6991084701961131632).epsilon(1e-13));
    CHECK(d_rtn(2.0, 5.0, 1.0) == doctest::Approx(0.4537038564018676377).epsilon(1e-13));
    for (double t : {0.0, 0.5, 2.0, 10.0}) {
        CHECK(d_rtn(t, 2.0, 1.0) == doctest::Approx(std::exp(-2.0 * t) * (1 + 2.0 * t)).epsilon(1e-14));
    }
    CHECK(d_rtn(0.8114235059009695864, 0.1, 1.0) < 1e-14);
}

TEST_CASE("d_rtn is continuous across the critical rate") {
    for (double t = 0.0; t <= 20.0; t += 0.05) {
        double c = d_rtn(t, 2.0, 1.0);
        for (double eps : {1e-9, 1e-6, 1e-4}) {
            CHECK(std::abs(d_rtn(t, 2.0 * (1 + eps), 1.0) - c) < 10 * eps);
            CHECK(std::abs(d_rtn(t, 2.0 * (1 - eps), 1.0) - c) < 10 * eps);
        }
    }
}

TEST_CASE("d_rtn zero-rate limit") {
    for (double t = 0.0; t <= 30.0; t += 0.01) {
        CHECK(d_rtn(t, 0.0, 1.0) == doctest::Approx(std::abs(std::cos(2 * t))).epsilon(1e-12));
    }
}

TEST_CASE("d_y golden values") {
    CHECK(d_y(5.0, 0.1, 0.63, 1.0, 1.0) == doctest::Approx(0.1631912922592604255).epsilon(1e-11));
    CHECK(d_y(2.0, 0.5, 1.0, 2.0, 1.5) == doctest::Approx(0.5273227877799980571).epsilon(1e-11));
    CHECK(d_y(0.0, 0.1, 0.63, 1.0, 1.0) == 1.0);
    CHECK(d_y(4.0, 0.1, 0.0, 1.0, 1.0) == 1.0);
}

TEST_CASE("d_y is symmetric in the two rates and continuous at equal rates") {
    for (double t : {0.3, 1.0, 4.0, 12.0}) {
        CHECK(d_y(t, 0.2, 1.0, 1.3, 1.0) == doctest::Approx(d_y(t, 1.3, 1.0, 0.2, 1.0)).epsilon(1e-12));
        double c = d_y(t, 1.0, 1.0, 1.0, 1.0);
        for (double eps : {1e-9, 1e-6, 1e-3, 0.049, 0.051, 0.2}) {
            double up = d_y(t, 1.0 + eps, 1.0, 1.0, 1.0);
            CHECK(std::abs(up - c) < 2 * eps + 1e-12);
        }
    }
}

TEST_CASE("correlations") {
    CHECK(corr_ou(0.0, 0.1, 0.63) == doctest::Approx(0.63 * 0.63 / 0.2));
    CHECK(corr_ou(-3.0, 0.1, 0.63) == corr_ou(3.0, 0.1, 0.63));
    CHECK(corr_rtn(0.0, 0.1) == 1.0);
    CHECK(corr_rtn(1.0 / 0.2, 0.1) == doctest::Approx(std::exp(-1.0)));
    CHECK(corr_y(0.0, 0.0, 0.1, 1.0, 0.63) == 0.0);
    CHECK(corr_y(3.0, 7.0, 0.1, 1.0, 0.63) == corr_y(7.0, 3.0, 0.1, 1.0, 0.63));
    CHECK(corr_y_stationary(0.0, 0.5, 2.0, 1.0) == doctest::Approx(1.0 / (2.0 * 2.5)).epsilon(1e-12));
    CHECK(corr_y_stationary(0.0, 1.0, 1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("spectrum_y shape") {
    const double g = 0.1, k = 1.0, s = 0.63;
    CHECK(spectrum_y(0.0, g, k, s) == 0.0);
    CHECK(spectrum_y(-0.7, g, k, s) == spectrum_y(0.7, g, k, s));
    double peak = std::sqrt(g * k);
    CHECK(spectrum_y(peak, g, k, s) > spectrum_y(peak * 1.001, g, k, s));
    CHECK(spectrum_y(peak, g, k, s) > spectrum_y(peak * 0.999, g, k, s));
    CHECK(spectrum_y(1e5, g, k, s) * 1e10 == doctest::Approx(s * s / (2 * std::numbers::pi)).epsilon(1e-8));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(d_ou(-1.0, 0.1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(d_ou(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(d_y(1.0, 0.1, 1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(d_rtn(1.0, -0.1, 1.0), std::invalid_argument);
}

TEST_CASE("tabulate dispatch") {
    AnalyticParams p;
    p.gamma = 1.0;
    p.sigma = 1.0;
    auto v = tabulate(Formula::d_ou, p, {0.0, 1.0});
    CHECK(v[0] == 1.0);
    CHECK(v[1] == doctest::Approx(0.7144927122536721739));
    CHECK(parse_formula("spectrum_y") == Formula::spectrum_y);
    CHECK(is_spectral(Formula::spectrum_y));
    CHECK_THROWS_AS(parse_formula("nope"), std::invalid_argument);
    AnalyticParams missing;
    CHECK_THROWS_AS(tabulate(Formula::d_y, missing, {1.0}), std::invalid_argument);
}
