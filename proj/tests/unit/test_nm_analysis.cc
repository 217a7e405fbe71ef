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
#include "qdeph/dephasing.h"
#include "qdeph/nm_analysis.h"

using namespace qdeph;

namespace {

DephasingCurve exact_curve(double t_max, std::size_t n, double (*f)(double)) {
    TimeGrid grid(t_max, n);
    std::vector<double> d;
    for (double t : grid.times()) d.push_back(f(t));
    return analytic_curve(grid, 1.0, d);
}

}  // namespace

TEST_CASE("monotone curves are Markovian") {
    DephasingCurve c = exact_curve(40.0, 201, [](double t) { return analytic::d_ou(t, 0.1, 0.63, 1.0); });
    RevivalReport r = detect_revivals(c);
    CHECK(r.verdict == Verdict::markovian);
    CHECK(r.nm_measure == 0.0);
    CHECK(r.revivals.empty());
    CHECK(to_string(r.verdict) == "Markovian");
}

TEST_CASE("|cos 2t| on a quarter period has no revival, on a half period one") {
    auto f = [](double t) { return std::abs(std::cos(2.0 * t)); };
    DephasingCurve quarter = exact_curve(std::numbers::pi / 2.0, 401, f);
    CHECK(nm_measure(quarter) == doctest::Approx(1.0).epsilon(1e-12));
    DephasingCurve half = exact_curve(std::numbers::pi, 801, f);
    RevivalReport r = detect_revivals(half);
    CHECK(r.revivals.size() == 2);
    CHECK(r.nm_measure == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(to_string(r.verdict) == "NonMarkovian");
}

TEST_CASE("revivals of the RTN closed form") {
    TimeGrid grid(30.0, 3001);
    std::vector<double> d;
    for (double t : grid.times()) d.push_back(analytic::d_rtn(t, 0.1, 1.0));
    RevivalReport r = detect_revivals(analytic_curve(grid, 1.0, d));
    REQUIRE(r.revivals.size() >= 3);
    CHECK(std::abs(r.revivals[0].t_start - 0.8114235059009695864) <= grid.dt());
    double sum = 0;
    for (const Revival &rv : r.revivals) {
        CHECK(rv.depth > 0);
        CHECK(rv.t_end > rv.t_start);
        sum += rv.depth;
    }
    CHECK(r.nm_measure == doctest::Approx(sum));
}

TEST_CASE("nm_measure of the RTN closed form converges to the exact sum of rises") {
    // Exact value: maxima e^{-g k pi / v} at t = k pi / v, minima 0, plus the
    // partial rise into t = 30; evaluated at 40 significant digits.
    const double exact = 5.575564574711678102;
    double previous_error = 1.0;
    for (std::size_t n : {30001, 300001, 3000001}) {
        TimeGrid grid(30.0, n);
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = analytic::d_rtn(grid.time(k), 0.1, 1.0);
        double error = std::abs(nm_measure(analytic_curve(grid, 1.0, d)) - exact);
        CHECK(error < previous_error);
        previous_error = error;
    }
    CHECK(previous_error < 1e-4);
}

TEST_CASE("rises run from a grid minimum to the next grid maximum") {
    std::vector<double> v = {1.0, 0.8, 0.81, 0.6, 0.62, 0.4, 0.55, 0.7, 0.7, 0.3};
    auto exact = significant_rises(v, {}, 3.0);
    REQUIRE(exact.size() == 3);
    CHECK(exact[2].i_min == 5);
    CHECK(exact[2].i_max == 8);
    CHECK(exact[2].rise == doctest::Approx(0.3));
    std::vector<double> se(v.size(), 0.01);
    auto gated = significant_rises(v, se, 3.0);
    REQUIRE(gated.size() == 1);
    CHECK(gated[0].i_min == 5);
}

TEST_CASE("hysteresis ignores sub-threshold wiggles") {
    std::vector<double> v = {1.0, 0.8, 0.81, 0.6, 0.62, 0.4, 0.5, 0.49, 0.7, 0.3};
    std::vector<double> se(v.size(), 0.01);
    auto rises = hysteresis_rises(v, se, 3.0);
    REQUIRE(rises.size() == 1);
    CHECK(rises[0].i_min == 5);
    CHECK(rises[0].i_max == 8);
    CHECK(rises[0].rise == doctest::Approx(0.3));
    CHECK(significant_rises(v, se, 3.0).size() == 2);
}

TEST_CASE("a rise still open at the end is reported") {
    std::vector<double> v = {1.0, 0.2, 0.5, 0.9};
    for (const auto &rises : {significant_rises(v, {}, 3.0), hysteresis_rises(v, {}, 3.0)}) {
        REQUIRE(rises.size() == 1);
        CHECK(rises[0].i_max == 3);
    }
}

TEST_CASE("statistical threshold suppresses noise-level rises") {
    TimeGrid grid(10.0, 11);
    DephasingCurve c = analytic_curve(grid, 1.0, {1.0, 0.5, 0.3, 0.31, 0.2, 0.22, 0.1, 0.1, 0.1, 0.1, 0.1});
    CHECK(detect_revivals(c).verdict == Verdict::non_markovian);
    c.std_err = std::vector<double>(11, 0.01);
    RevivalReport r = detect_revivals(c, 3.0);
    CHECK(r.verdict == Verdict::markovian);
    CHECK(r.policy.statistical);
    CHECK(detect_revivals(c, 0.5).verdict == Verdict::non_markovian);
}

TEST_CASE("argument validation") {
    TimeGrid grid(1.0, 2);
    DephasingCurve c = analytic_curve(grid, 1.0, {1.0, 0.5});
    CHECK_THROWS_AS(detect_revivals(c), std::invalid_argument);
    TimeGrid g3(1.0, 3);
    DephasingCurve c3 = analytic_curve(g3, 1.0, {1.0, 0.5, 0.2});
    CHECK_THROWS_WITH_AS(detect_revivals(c3, 0.0), doctest::Contains("run.significance"), std::invalid_argument);
}
