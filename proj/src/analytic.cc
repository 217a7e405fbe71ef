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

#include "qdeph/analytic.h"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qdeph::analytic {

namespace {

void require(bool ok, const char *message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

void check_time(double t) {
    require(std::isfinite(t) && t >= 0.0, "analytic: t must be finite and >= 0");
}

void check_rate(double r, const char *message) {
    require(std::isfinite(r) && r > 0.0, message);
}

void check_sigma(double s) {
    require(std::isfinite(s) && s >= 0.0, "analytic: sigma must be finite and >= 0");
}

// (1 - e^{-r u}) / r, continuous at r = 0.
double relax_integral(double r, double u) {
    return r == 0.0 ? u : -std::expm1(-r * u) / r;
}

// 2x - 3 - e^{-2x} + 4 e^{-x}; Taylor series near 0 where the closed form
// cancels to O(x^3).
double ou_bracket(double x) {
    if (x < 1.0) {
        // sum_{n>=3} (-1)^n (4 - 2^n) x^n / n!
        double sum = 0.0;
        double xn_over_fact = x * x / 2.0;  // x^2/2!
        double two_n = 4.0;
        for (int n = 3; n < 40; ++n) {
            xn_over_fact *= x / n;
            two_n *= 2.0;
            double term = ((n % 2 == 0) ? 1.0 : -1.0) * (4.0 - two_n) * xn_over_fact;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        return sum;
    }
    return 2.0 * x - 3.0 - std::exp(-2.0 * x) + 4.0 * std::exp(-x);
}

// sin(x)/x and sinh(x)/x.
double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

// Var(integral of Y) / sigma^2 near gamma = kappa: series in the rate
// difference d around the mean rate, using
//   (e^{-g v} - e^{-k v})^2 / d^2 = e^{-(g+k) v} (sinh(d v/2) / (d/2))^2
// and int_0^t v^n e^{-s v} dv = n! s^{-n-1} P(n+1, s t).
double y_variance_series(double t, double gamma, double kappa) {
    double s = gamma + kappa;
    double d = kappa - gamma;
    double ratio2 = (d / s) * (d / s);
    double sum = 0.0;
    double weight = 2.0 / (s * s * s);
    for (int m = 0; m < 60; ++m) {
        double term = weight * boost::math::gamma_p(2.0 * m + 3.0, s * t);
        sum += term;
        if (term <= 1e-18 * sum) {
            break;
        }
        weight *= ratio2;
    }
    return sum;
}

// Impulse response of Y to a unit increment of the OU drive's Wiener path.
double y_response(double v, double gamma, double kappa) {
    return std::exp(-kappa * v) - gamma * std::exp(-gamma * v) * relax_integral(kappa - gamma, v);
}

// corr_y / sigma^2 = int_0^{min(t,s)} h(|t-s| + w) h(w) dw by composite
// Gauss-Legendre.
double corr_y_quadrature(double t, double s, double gamma, double kappa) {
    using boost::math::quadrature::gauss;
    double tau = std::abs(t - s);
    double r_min = std::min(gamma, kappa);
    double r_max = std::max(gamma, kappa);
    double upper = std::min(std::min(t, s), 80.0 / r_min);
    if (upper <= 0.0) {
        return 0.0;
    }
    std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * upper * r_max)));
    double width = upper / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        double lo = width * static_cast<double>(p);
        sum += gauss<double, 20>::integrate(
            [&](double w) { return y_response(tau + w, gamma, kappa) * y_response(w, gamma, kappa); }, lo,
            lo + width);
    }
    return sum;
}

bool degenerate(double gamma, double kappa) {
    return std::abs(gamma - kappa) < kDegenerateRateThreshold * (gamma + kappa);
}

}  // namespace

void AnalyticParams::validate() const {
    if (gamma) require(std::isfinite(*gamma) && *gamma >= 0.0, "gamma: must be finite and >= 0");
    if (sigma) require(std::isfinite(*sigma) && *sigma >= 0.0, "sigma: must be finite and >= 0");
    if (kappa) require(std::isfinite(*kappa) && *kappa > 0.0, "kappa: must be finite and > 0");
    if (mu) require(std::isfinite(*mu) && *mu > 0.0, "mu: must be finite and > 0");
    require(std::isfinite(omega0) && omega0 > 0.0, "omega0: must be finite and > 0");
}

double AnalyticParams::require_gamma() const {
    require(gamma.has_value(), "gamma: required by this formula");
    return *gamma;
}

double AnalyticParams::require_sigma() const {
    require(sigma.has_value(), "sigma: required by this formula");
    return *sigma;
}

double AnalyticParams::require_kappa() const {
    require(kappa.has_value(), "kappa: required by this formula");
    return *kappa;
}

double d_ou(double t, double gamma, double sigma, double omega0) {
    check_time(t);
    check_rate(gamma, "d_ou: gamma must be > 0");
    check_sigma(sigma);
    check_rate(omega0, "d_ou: omega0 must be > 0");
    double prefactor = omega0 * omega0 * sigma * sigma / (gamma * gamma * gamma);
    return std::exp(-prefactor * ou_bracket(gamma * t));
}

double d_rtn(double t, double gamma, double omega0) {
    check_time(t);
    require(std::isfinite(gamma) && gamma >= 0.0, "d_rtn: gamma must be finite and >= 0");
    check_rate(omega0, "d_rtn: omega0 must be > 0");
    double w2 = 2.0 * omega0;
    if (gamma > w2) {
        double nu = std::sqrt((gamma - w2) * (gamma + w2));
        // e^{-g t} cosh(nu t) and e^{-g t} sinh(nu t)/nu with g - nu = w2^2/(g + nu).
        double slow = std::exp(-(w2 * w2 / (gamma + nu)) * t);
        double fast = std::exp(-2.0 * nu * t);
        return slow * (0.5 * (1.0 + fast) + gamma * relax_integral(2.0 * nu, t));
    }
    if (gamma < w2) {
        double nu = std::sqrt((w2 - gamma) * (w2 + gamma));
        return std::exp(-gamma * t) * std::abs(std::cos(nu * t) + gamma * t * sinc(nu * t));
    }
    return std::exp(-gamma * t) * (1.0 + gamma * t);
}

double d_y(double t, double gamma, double sigma, double kappa, double omega0) {
    check_time(t);
    check_rate(gamma, "d_y: gamma must be > 0");
    check_rate(kappa, "d_y: kappa must be > 0");
    check_sigma(sigma);
    check_rate(omega0, "d_y: omega0 must be > 0");
    double w2s2 = omega0 * omega0 * sigma * sigma;
    if (degenerate(gamma, kappa)) {
        return std::exp(-2.0 * w2s2 * y_variance_series(t, gamma, kappa));
    }
    double gk = gamma - kappa;
    double mixed = gamma * std::exp(-kappa * t) - kappa * std::exp(-gamma * t);
    double num = gk * gk - mixed * mixed +
                 gamma * kappa *
                     (2.0 * std::exp(-(gamma + kappa) * t) - std::exp(-2.0 * gamma * t) - std::exp(-2.0 * kappa * t));
    double den = gamma * kappa * gk * gk * (gamma + kappa);
    return std::exp(-w2s2 * num / den);
}

double corr_ou(double tau, double gamma, double sigma) {
    check_rate(gamma, "corr_ou: gamma must be > 0");
    check_sigma(sigma);
    return sigma * sigma / (2.0 * gamma) * std::exp(-gamma * std::abs(tau));
}

double corr_rtn(double tau, double gamma) {
    require(std::isfinite(gamma) && gamma >= 0.0, "corr_rtn: gamma must be finite and >= 0");
    return std::exp(-2.0 * gamma * std::abs(tau));
}

double corr_y(double t, double s, double gamma, double kappa, double sigma) {
    check_time(t);
    check_time(s);
    check_rate(gamma, "corr_y: gamma must be > 0");
    check_rate(kappa, "corr_y: kappa must be > 0");
    check_sigma(sigma);
    if (degenerate(gamma, kappa)) {
        return sigma * sigma * corr_y_quadrature(t, s, gamma, kappa);
    }
    double tau = std::abs(t - s);
    double g = gamma;
    double k = kappa;
    double pre = (sigma / (g - k)) * (sigma / (g - k));
    double body = 0.5 * g * (std::exp(-g * tau) - std::exp(-g * (t + s))) +
                  0.5 * k * (std::exp(-k * tau) - std::exp(-k * (t + s))) +
                  g * k / (g + k) *
                      (std::exp(-k * t - g * s) + std::exp(-g * t - k * s) - std::exp(-k * tau) - std::exp(-g * tau));
    return pre * body;
}

double corr_y_stationary(double tau, double gamma, double kappa, double sigma) {
    check_rate(gamma, "corr_y_stationary: gamma must be > 0");
    check_rate(kappa, "corr_y_stationary: kappa must be > 0");
    check_sigma(sigma);
    double a = std::abs(tau);
    if (degenerate(gamma, kappa)) {
        // Stationary limit of the quadrature form, integrated to infinity.
        return sigma * sigma * corr_y_quadrature(a + 200.0 / std::min(gamma, kappa),
                                                 200.0 / std::min(gamma, kappa), gamma, kappa);
    }
    double g = gamma;
    double k = kappa;
    double pre = (sigma / (g - k)) * (sigma / (g - k));
    return pre * (0.5 * g * std::exp(-g * a) + 0.5 * k * std::exp(-k * a) -
                  g * k / (g + k) * (std::exp(-k * a) + std::exp(-g * a)));
}

double spectrum_y(double omega, double gamma, double kappa, double sigma) {
    require(std::isfinite(omega), "spectrum_y: omega must be finite");
    check_rate(gamma, "spectrum_y: gamma must be > 0");
    check_rate(kappa, "spectrum_y: kappa must be > 0");
    check_sigma(sigma);
    double w2 = omega * omega;
    return sigma * sigma / (2.0 * std::numbers::pi) * w2 / ((gamma * gamma + w2) * (kappa * kappa + w2));
}

Formula parse_formula(std::string_view name) {
    if (name == "d_ou") return Formula::d_ou;
    if (name == "d_rtn") return Formula::d_rtn;
    if (name == "d_y") return Formula::d_y;
    if (name == "corr_ou") return Formula::corr_ou;
    if (name == "corr_rtn") return Formula::corr_rtn;
    if (name == "corr_y_stationary") return Formula::corr_y_stationary;
    if (name == "spectrum_y") return Formula::spectrum_y;
    throw std::invalid_argument("unknown formula '" + std::string(name) +
                                "' (expected d_ou, d_rtn, d_y, corr_ou, corr_rtn, corr_y_stationary, spectrum_y)");
}

std::string_view to_string(Formula f) {
    switch (f) {
        case Formula::d_ou:
            return "d_ou";
        case Formula::d_rtn:
            return "d_rtn";
        case Formula::d_y:
            return "d_y";
        case Formula::corr_ou:
            return "corr_ou";
        case Formula::corr_rtn:
            return "corr_rtn";
        case Formula::corr_y_stationary:
            return "corr_y_stationary";
        case Formula::spectrum_y:
            return "spectrum_y";
    }
    return "?";
}

bool is_spectral(Formula f) {
    return f == Formula::spectrum_y;
}

std::vector<double> tabulate(Formula f, const AnalyticParams &p, const std::vector<double> &x) {
    p.validate();
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        switch (f) {
            case Formula::d_ou:
                out[i] = d_ou(x[i], p.require_gamma(), p.require_sigma(), p.omega0);
                break;
            case Formula::d_rtn:
                out[i] = d_rtn(x[i], p.require_gamma(), p.omega0);
                break;
            case Formula::d_y:
                out[i] = d_y(x[i], p.require_gamma(), p.require_sigma(), p.require_kappa(), p.omega0);
                break;
            case Formula::corr_ou:
                out[i] = corr_ou(x[i], p.require_gamma(), p.require_sigma());
                break;
            case Formula::corr_rtn:
                out[i] = corr_rtn(x[i], p.require_gamma());
                break;
            case Formula::corr_y_stationary:
                out[i] = corr_y_stationary(x[i], p.require_gamma(), p.require_kappa(), p.require_sigma());
                break;
            case Formula::spectrum_y:
                out[i] = spectrum_y(x[i], p.require_gamma(), p.require_kappa(), p.require_sigma());
                break;
        }
    }
    return out;
}

}  // namespace qdeph::analytic
