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

#include "qdeph/noise.h"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>

#include "qdeph/parallel.h"
#include "qdeph/rng.h"

namespace qdeph {

namespace {

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

// (1 - e^{-r u}) / r, continuous at r = 0.
double relax_integral(double r, double u) {
    if (r == 0.0) {
        return u;
    }
    return -std::expm1(-r * u) / r;
}

using Vec2 = std::array<double, 2>;

// Q = int_0^h r(u) r(u)^T du for the noise response r of a two-state linear
// system, by composite Gauss-Legendre. Each panel spans at most 0.5/rate, where
// the 20-point rule is exact to rounding for these exponentials.
template <class Response>
std::array<double, 3> response_covariance(Response r, double h, double rate) {
    using boost::math::quadrature::gauss;
    std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * h * rate)));
    double width = h / static_cast<double>(panels);
    std::array<double, 3> q{0.0, 0.0, 0.0};
    for (std::size_t p = 0; p < panels; ++p) {
        double lo = width * static_cast<double>(p);
        double hi = lo + width;
        q[0] += gauss<double, 20>::integrate([&](double u) { Vec2 v = r(u); return v[0] * v[0]; }, lo, hi);
        q[1] += gauss<double, 20>::integrate([&](double u) { Vec2 v = r(u); return v[0] * v[1]; }, lo, hi);
        q[2] += gauss<double, 20>::integrate([&](double u) { Vec2 v = r(u); return v[1] * v[1]; }, lo, hi);
    }
    return q;
}

void check_row_spans(const TimeGrid &grid, std::span<double> values, std::span<double> integrals) {
    require(values.size() == grid.size() && integrals.size() == grid.size(),
            "sample: output spans must have one entry per grid point");
}

TrajectoryEnsemble sample_with(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                               std::size_t n, int threads) {
    spec.validate();
    require(n >= 1, "sample: realization count must be at least 1");
    PathSampler sampler(spec, grid);
    TrajectoryEnsemble ens;
    ens.spec = spec;
    ens.grid = grid;
    ens.master_seed = master_seed;
    ens.n_paths = n;
    ens.values.assign(n * grid.size(), 0.0);
    ens.integrals.assign(n * grid.size(), 0.0);
    ens.warnings = grid_warnings(spec, grid);
    std::size_t m = grid.size();
    for_each_chunk(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            sampler.sample(master_seed, i, std::span<double>(ens.values.data() + i * m, m),
                           std::span<double>(ens.integrals.data() + i * m, m));
        }
    });
    return ens;
}

}  // namespace

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::ou:
            return "ou";
        case NoiseKind::rtn:
            return "rtn";
        case NoiseKind::filtered_ou:
            return "filtered_ou";
        case NoiseKind::filtered_rtn:
            return "filtered_rtn";
    }
    return "?";
}

NoiseKind parse_noise_kind(std::string_view text) {
    if (text == "ou") return NoiseKind::ou;
    if (text == "rtn") return NoiseKind::rtn;
    if (text == "filtered_ou" || text == "y") return NoiseKind::filtered_ou;
    if (text == "filtered_rtn" || text == "z") return NoiseKind::filtered_rtn;
    throw std::invalid_argument("unknown noise kind '" + std::string(text) +
                                "' (expected ou, rtn, filtered_ou, filtered_rtn)");
}

NoiseSpec NoiseSpec::ou(double gamma, double sigma) {
    NoiseSpec s{NoiseKind::ou, gamma, sigma, std::nullopt, std::nullopt};
    s.validate();
    return s;
}

NoiseSpec NoiseSpec::rtn(double gamma) {
    NoiseSpec s{NoiseKind::rtn, gamma, std::nullopt, std::nullopt, std::nullopt};
    s.validate();
    return s;
}

NoiseSpec NoiseSpec::filtered_ou(double gamma, double sigma, double kappa) {
    NoiseSpec s{NoiseKind::filtered_ou, gamma, sigma, kappa, std::nullopt};
    s.validate();
    return s;
}

NoiseSpec NoiseSpec::filtered_rtn(double gamma, double mu) {
    NoiseSpec s{NoiseKind::filtered_rtn, gamma, std::nullopt, std::nullopt, mu};
    s.validate();
    return s;
}

void NoiseSpec::validate() const {
    bool gaussian = kind == NoiseKind::ou || kind == NoiseKind::filtered_ou;
    std::string k(to_string(kind));
    require(std::isfinite(gamma), "noise.gamma: must be finite");
    if (gaussian) {
        // The OU stationary variance sigma^2/(2 gamma) needs gamma > 0.
        require(gamma > 0.0, "noise.gamma: must be > 0 for kind " + k);
        require(sigma.has_value(), "noise.sigma: required for kind " + k);
        require(std::isfinite(*sigma) && *sigma >= 0.0, "noise.sigma: must be finite and >= 0");
    } else {
        require(gamma >= 0.0, "noise.gamma: must be >= 0 for kind " + k);
        require(!sigma.has_value(), "noise.sigma: not allowed for kind " + k);
    }
    if (kind == NoiseKind::filtered_ou) {
        require(kappa.has_value(), "noise.kappa: required for kind " + k);
        require(std::isfinite(*kappa) && *kappa > 0.0, "noise.kappa: must be finite and > 0");
    } else {
        require(!kappa.has_value(), "noise.kappa: not allowed for kind " + k);
    }
    if (kind == NoiseKind::filtered_rtn) {
        require(mu.has_value(), "noise.mu: required for kind " + k);
        require(std::isfinite(*mu) && *mu > 0.0, "noise.mu: must be finite and > 0");
    } else {
        require(!mu.has_value(), "noise.mu: not allowed for kind " + k);
    }
}

double NoiseSpec::max_rate() const {
    return std::max({gamma, kappa.value_or(0.0), mu.value_or(0.0)});
}

double NoiseSpec::min_rate() const {
    double r = 0.0;
    for (double v : {gamma, kappa.value_or(0.0), mu.value_or(0.0)}) {
        if (v > 0.0 && (r == 0.0 || v < r)) {
            r = v;
        }
    }
    return r;
}

TimeGrid::TimeGrid(double t_max, std::size_t n_out, std::size_t substeps)
    : t_max_(t_max), n_out_(n_out), substeps_(substeps) {
    require(std::isfinite(t_max) && t_max > 0.0, "grid.t_max: must be finite and > 0");
    require(n_out >= 2, "grid.n_out: must be >= 2");
    require(substeps >= 1, "grid.substeps: must be >= 1");
}

TimeGrid TimeGrid::with_default_substeps(double t_max, std::size_t n_out, const NoiseSpec &spec) {
    TimeGrid coarse(t_max, n_out, 1);
    double rate = spec.max_rate();
    std::size_t sub = 1;
    if (rate > 0.0) {
        sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(coarse.dt() * rate / 0.05 - 1e-9)));
    }
    return TimeGrid(t_max, n_out, sub);
}

double TimeGrid::time(std::size_t k) const {
    if (k + 1 == n_out_) {
        return t_max_;
    }
    return t_max_ * static_cast<double>(k) / static_cast<double>(n_out_ - 1);
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> t(n_out_);
    for (std::size_t k = 0; k < n_out_; ++k) {
        t[k] = time(k);
    }
    return t;
}

TelegraphPath sample_telegraph_path(double gamma, double t_max, std::uint64_t key, std::uint64_t path_index) {
    PathRng rng(key, path_index);
    TelegraphPath path;
    path.x0 = rng.sign();
    double t = 0.0;
    while (true) {
        t += rng.exponential(gamma);
        if (!(t <= t_max)) {
            break;
        }
        path.switch_times.push_back(t);
    }
    return path;
}

void integrate_telegraph(const TelegraphPath &path, const TimeGrid &grid, std::span<double> values,
                         std::span<double> integrals) {
    check_row_spans(grid, values, integrals);
    double x = path.x0;
    double cur = 0.0;
    double acc = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double t = grid.time(k);
        while (next < path.switch_times.size() && path.switch_times[next] <= t) {
            double s = path.switch_times[next++];
            acc += x * (s - cur);
            cur = s;
            x = -x;
        }
        values[k] = x;
        integrals[k] = acc + x * (t - cur);
    }
}

PathSampler::PathSampler(const NoiseSpec &spec, const TimeGrid &grid) : spec_(spec), grid_(grid) {
    spec_.validate();
    double h = grid_.h();
    double g = spec_.gamma;
    if (spec_.kind == NoiseKind::ou) {
        double s = *spec_.sigma;
        a_ = std::exp(-g * h);
        c_ = relax_integral(g, h);
        d_ = 1.0;
        // State (X, running integral of X); response to a unit kick u before the step end.
        auto q = response_covariance(
            [&](double u) { return Vec2{s * std::exp(-g * u), s * relax_integral(g, u)}; }, h, g);
        l11_ = std::sqrt(q[0]);
        l21_ = l11_ > 0.0 ? q[1] / l11_ : 0.0;
        l22_ = std::sqrt(std::max(0.0, q[2] - l21_ * l21_));
    } else if (spec_.kind == NoiseKind::filtered_ou) {
        double s = *spec_.sigma;
        double k = *spec_.kappa;
        double delta = k - g;
        a_ = std::exp(-g * h);
        d_ = std::exp(-k * h);
        c_ = -g * std::exp(-g * h) * relax_integral(delta, h);
        // State (X, Y); Y responds to a kick through dX directly and through the OU drift.
        auto q = response_covariance(
            [&](double u) {
                double y = std::exp(-k * u) - g * std::exp(-g * u) * relax_integral(delta, u);
                return Vec2{s * std::exp(-g * u), s * y};
            },
            h, std::max(g, k));
        l11_ = std::sqrt(q[0]);
        l21_ = l11_ > 0.0 ? q[1] / l11_ : 0.0;
        l22_ = std::sqrt(std::max(0.0, q[2] - l21_ * l21_));
    }
}

void PathSampler::sample(std::uint64_t key, std::uint64_t path_index, std::span<double> values,
                         std::span<double> integrals) const {
    check_row_spans(grid_, values, integrals);
    switch (spec_.kind) {
        case NoiseKind::ou:
        case NoiseKind::filtered_ou:
            sample_linear(key, path_index, values, integrals);
            break;
        case NoiseKind::rtn:
            integrate_telegraph(sample_telegraph_path(spec_.gamma, grid_.t_max(), key, path_index), grid_,
                                values, integrals);
            break;
        case NoiseKind::filtered_rtn:
            sample_filtered_rtn(key, path_index, values, integrals);
            break;
    }
}

void PathSampler::sample_linear(std::uint64_t key, std::uint64_t path_index, std::span<double> values,
                                std::span<double> integrals) const {
    PathRng rng(key, path_index);
    bool filtered = spec_.kind == NoiseKind::filtered_ou;
    double kappa = filtered ? *spec_.kappa : 1.0;
    double x = 0.0;
    double second = 0.0;  // running integral (OU) or Y (filtered)
    values[0] = 0.0;
    integrals[0] = 0.0;
    std::size_t sub = grid_.substeps();
    for (std::size_t k = 1; k < grid_.size(); ++k) {
        for (std::size_t j = 0; j < sub; ++j) {
            double z1 = rng.normal();
            double z2 = rng.normal();
            double x_next = a_ * x + l11_ * z1;
            second = c_ * x + d_ * second + l21_ * z1 + l22_ * z2;
            x = x_next;
        }
        if (filtered) {
            // d(X - Y) = kappa Y dt with X(0) = Y(0) = 0.
            values[k] = second;
            integrals[k] = (x - second) / kappa;
        } else {
            values[k] = x;
            integrals[k] = second;
        }
    }
}

void PathSampler::sample_filtered_rtn(std::uint64_t key, std::uint64_t path_index, std::span<double> values,
                                      std::span<double> integrals) const {
    TelegraphPath path = sample_telegraph_path(spec_.gamma, grid_.t_max(), key, path_index);
    double mu = *spec_.mu;
    double x = path.x0;
    double z = 0.0;
    double acc = 0.0;
    double cur = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        double t = grid_.time(k);
        while (next < path.switch_times.size() && path.switch_times[next] <= t) {
            double s = path.switch_times[next++];
            acc += z * relax_integral(mu, s - cur);
            z = z * std::exp(-mu * (s - cur)) - 2.0 * x;
            x = -x;
            cur = s;
        }
        values[k] = z * std::exp(-mu * (t - cur));
        integrals[k] = acc + z * relax_integral(mu, t - cur);
    }
}

std::vector<std::string> grid_warnings(const NoiseSpec &spec, const TimeGrid &grid) {
    std::vector<std::string> out;
    bool filtered = spec.kind == NoiseKind::filtered_ou || spec.kind == NoiseKind::filtered_rtn;
    if (filtered && grid.h() * spec.max_rate() > 0.1) {
        out.push_back("grid.substeps: substep h=" + std::to_string(grid.h()) +
                      " is coarse for the fastest rate " + std::to_string(spec.max_rate()) +
                      " (h * rate > 0.1)");
    }
    return out;
}

TrajectoryEnsemble sample_ou(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                             std::size_t n, int threads) {
    require(spec.kind == NoiseKind::ou, "sample_ou: spec kind must be ou");
    return sample_with(spec, grid, master_seed, n, threads);
}

TrajectoryEnsemble sample_rtn(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                              std::size_t n, int threads) {
    require(spec.kind == NoiseKind::rtn, "sample_rtn: spec kind must be rtn");
    return sample_with(spec, grid, master_seed, n, threads);
}

TrajectoryEnsemble sample_filtered(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                                   std::size_t n, int threads) {
    require(spec.kind == NoiseKind::filtered_ou || spec.kind == NoiseKind::filtered_rtn,
            "sample_filtered: spec kind must be filtered_ou or filtered_rtn");
    return sample_with(spec, grid, master_seed, n, threads);
}

TrajectoryEnsemble sample(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed, std::size_t n,
                          int threads) {
    return sample_with(spec, grid, master_seed, n, threads);
}

}  // namespace qdeph
