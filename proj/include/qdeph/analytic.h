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

#ifndef QDEPH_ANALYTIC_H
#define QDEPH_ANALYTIC_H

#include <optional>
#include <string_view>
#include <vector>

namespace qdeph::analytic {

/// Parameter bundle for the closed forms; each formula uses a subset.
struct AnalyticParams {
    std::optional<double> gamma;
    std::optional<double> sigma;
    std::optional<double> kappa;
    std::optional<double> mu;
    double omega0 = 1.0;

    /// Throws std::invalid_argument if a present value is not strictly
    /// positive (gamma may be 0) or omega0 <= 0.
    void validate() const;
    double require_gamma() const;
    double require_sigma() const;
    double require_kappa() const;
};

/// Relative distance |gamma - kappa| / (gamma + kappa) below which d_y and
/// corr_y leave the closed form for their degenerate-rate evaluation.
inline constexpr double kDegenerateRateThreshold = 0.05;

/// Dephasing factor of OU noise started at X(0) = 0:
/// exp(-(w0^2 s^2 / g^3)(2 g t - 3 - e^{-2 g t} + 4 e^{-g t})).
double d_ou(double t, double gamma, double sigma, double omega0);

/// Dephasing factor of random telegraph noise with switching rate gamma.
/// Overdamped (gamma > 2 w0), oscillatory (gamma < 2 w0) and critical
/// branches are evaluated with real functions only. gamma = 0 is allowed.
double d_rtn(double t, double gamma, double omega0);

/// Dephasing factor of the OU-driven filtered process Y (Y(0) = X(0) = 0).
double d_y(double t, double gamma, double sigma, double kappa, double omega0);

double corr_ou(double tau, double gamma, double sigma);
double corr_rtn(double tau, double gamma);

/// Two-time correlation E[Y(t) Y(s)] for Y(0) = X(0) = 0. Symmetric in (t, s).
double corr_y(double t, double s, double gamma, double kappa, double sigma);
/// Limit of corr_y for t, s -> infinity at fixed lag tau.
double corr_y_stationary(double tau, double gamma, double kappa, double sigma);

/// Power spectrum of Y: (s^2 / 2 pi) w^2 / ((g^2 + w^2)(k^2 + w^2)).
/// Two-sided density in angular frequency: its integral over the real line
/// equals the stationary variance of Y.
double spectrum_y(double omega, double gamma, double kappa, double sigma);

/// Curves the tabulator knows how to emit.
enum class Formula { d_ou, d_rtn, d_y, corr_ou, corr_rtn, corr_y_stationary, spectrum_y };

Formula parse_formula(std::string_view name);
std::string_view to_string(Formula f);
/// True for formulas whose abscissa is an angular frequency.
bool is_spectral(Formula f);

/// Evaluates `f` at each abscissa (time, lag, or frequency).
std::vector<double> tabulate(Formula f, const AnalyticParams &params, const std::vector<double> &abscissa);

}  // namespace qdeph::analytic

#endif
