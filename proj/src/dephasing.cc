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

#include "qdeph/dephasing.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qdeph/parallel.h"
#include "qdeph/rng.h"

namespace qdeph {

namespace {

constexpr std::size_t kBootstrapResamples = 200;

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

double clamp01(double x) {
    return std::clamp(x, 0.0, 1.0);
}

// Delta-method standard error of |mean| for a bivariate sample described by
// its sums.
double delta_std_err(std::size_t n, double c, double s, double cc, double ss, double cs) {
    if (n < 2) {
        return 0.0;
    }
    double nd = static_cast<double>(n);
    double mc = c / nd;
    double ms = s / nd;
    double vxx = std::max(0.0, (cc - nd * mc * mc) / (nd - 1.0));
    double vyy = std::max(0.0, (ss - nd * ms * ms) / (nd - 1.0));
    double vxy = (cs - nd * mc * ms) / (nd - 1.0);
    double mod = std::hypot(mc, ms);
    double var;
    if (mod > 0.0) {
        double ux = mc / mod;
        double uy = ms / mod;
        var = ux * ux * vxx + 2.0 * ux * uy * vxy + uy * uy * vyy;
    } else {
        var = 0.5 * (vxx + vyy);
    }
    return std::sqrt(std::max(0.0, var) / nd);
}

// Sums of one realization range, accumulated in index order.
template <class RowFn>
PhasorSums reduce_chunked(std::size_t n, std::size_t points, double omega0, int threads, RowFn &&row_for) {
    std::vector<PhasorSums> partial(chunk_count(n), PhasorSums(points));
    for_each_chunk(n, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto state = row_for.make_state();
        for (std::size_t i = begin; i < end; ++i) {
            partial[chunk].add_path(row_for(state, i), omega0);
        }
    });
    PhasorSums total(points);
    for (const auto &p : partial) {
        total.merge(p);
    }
    return total;
}

struct StoredRows {
    const IntegratedEnsemble *ens;
    int make_state() const { return 0; }
    std::span<const double> operator()(int, std::size_t i) const { return ens->row(i); }
};

struct SampledRows {
    const PathSampler *sampler;
    std::uint64_t key;
    struct State {
        std::vector<double> values;
        std::vector<double> integrals;
    };
    State make_state() const {
        std::size_t m = sampler->grid().size();
        return State{std::vector<double>(m), std::vector<double>(m)};
    }
    std::span<const double> operator()(State &st, std::size_t i) const {
        sampler->sample(key, i, st.values, st.integrals);
        for (double v : st.integrals) {
            if (!std::isfinite(v)) {
                throw std::runtime_error("simulate_curve: non-finite integrated path value");
            }
        }
        return st.integrals;
    }
};

void check_omega0(double omega0) {
    require(std::isfinite(omega0) && omega0 > 0.0, "run.omega0: must be finite and > 0");
}

}  // namespace

IntegratedEnsemble integrate_paths(const TrajectoryEnsemble &ensemble) {
    require(ensemble.n_paths >= 1, "integrate_paths: ensemble is empty");
    std::size_t m = ensemble.grid.size();
    require(ensemble.values.size() == ensemble.n_paths * m, "integrate_paths: value matrix has the wrong size");
    for (double v : ensemble.values) {
        require(std::isfinite(v), "integrate_paths: non-finite value in ensemble");
    }
    IntegratedEnsemble out;
    out.grid = ensemble.grid;
    out.n_paths = ensemble.n_paths;
    if (ensemble.has_integrals()) {
        require(ensemble.integrals.size() == ensemble.values.size(),
                "integrate_paths: integral matrix has the wrong size");
        for (double v : ensemble.integrals) {
            require(std::isfinite(v), "integrate_paths: non-finite integral in ensemble");
        }
        out.values = ensemble.integrals;
        return out;
    }
    out.values.assign(ensemble.values.size(), 0.0);
    double dt = ensemble.grid.dt();
    for (std::size_t i = 0; i < ensemble.n_paths; ++i) {
        auto x = ensemble.row(i);
        double *dst = out.values.data() + i * m;
        double acc = 0.0;
        dst[0] = 0.0;
        for (std::size_t k = 1; k < m; ++k) {
            acc += 0.5 * dt * (x[k - 1] + x[k]);
            dst[k] = acc;
        }
    }
    return out;
}

PhasorSums::PhasorSums(std::size_t points)
    : c(points, 0.0), s(points, 0.0), cc(points, 0.0), ss(points, 0.0), cs(points, 0.0) {}

void PhasorSums::add_path(std::span<const double> integral, double omega0) {
    for (std::size_t k = 0; k < integral.size(); ++k) {
        double theta = 2.0 * omega0 * integral[k];
        double re = std::cos(theta);
        double im = -std::sin(theta);
        c[k] += re;
        s[k] += im;
        cc[k] += re * re;
        ss[k] += im * im;
        cs[k] += re * im;
    }
    ++n;
}

void PhasorSums::merge(const PhasorSums &other) {
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] += other.c[k];
        s[k] += other.s[k];
        cc[k] += other.cc[k];
        ss[k] += other.ss[k];
        cs[k] += other.cs[k];
    }
    n += other.n;
}

DephasingCurve curve_from_sums(const TimeGrid &grid, double omega0, const PhasorSums &sums) {
    require(sums.n >= 1, "dephasing_factor: ensemble is empty");
    std::size_t m = grid.size();
    DephasingCurve curve;
    curve.grid = grid;
    curve.omega0 = omega0;
    curve.n_realizations = sums.n;
    curve.phasor.resize(m);
    curve.d_values.resize(m);
    std::vector<double> se(m);
    double nd = static_cast<double>(sums.n);
    for (std::size_t k = 0; k < m; ++k) {
        std::complex<double> mean(sums.c[k] / nd, sums.s[k] / nd);
        curve.phasor[k] = mean;
        curve.d_values[k] = clamp01(std::abs(mean));
        se[k] = delta_std_err(sums.n, sums.c[k], sums.s[k], sums.cc[k], sums.ss[k], sums.cs[k]);
    }
    curve.std_err = std::move(se);
    return curve;
}

DephasingCurve dephasing_factor(const IntegratedEnsemble &integrated, double omega0, ErrorMethod method,
                                std::uint64_t bootstrap_seed) {
    check_omega0(omega0);
    require(integrated.n_paths >= 1, "dephasing_factor: ensemble is empty");
    std::size_t m = integrated.grid.size();
    PhasorSums sums = reduce_chunked(integrated.n_paths, m, omega0, 1, StoredRows{&integrated});
    DephasingCurve curve = curve_from_sums(integrated.grid, omega0, sums);
    if (method == ErrorMethod::bootstrap) {
        std::size_t n = integrated.n_paths;
        std::vector<double> acc(m, 0.0);
        std::vector<double> acc2(m, 0.0);
        std::vector<double> re(m), im(m);
        std::vector<std::size_t> draw(n);
        for (std::size_t r = 0; r < kBootstrapResamples; ++r) {
            PathRng rng(bootstrap_seed, r);
            for (auto &d : draw) {
                d = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
            }
            std::fill(re.begin(), re.end(), 0.0);
            std::fill(im.begin(), im.end(), 0.0);
            for (std::size_t d : draw) {
                auto row = integrated.row(d);
                for (std::size_t k = 0; k < m; ++k) {
                    double theta = 2.0 * omega0 * row[k];
                    re[k] += std::cos(theta);
                    im[k] -= std::sin(theta);
                }
            }
            for (std::size_t k = 0; k < m; ++k) {
                double mod = std::hypot(re[k], im[k]) / static_cast<double>(n);
                acc[k] += mod;
                acc2[k] += mod * mod;
            }
        }
        double b = static_cast<double>(kBootstrapResamples);
        std::vector<double> se(m);
        for (std::size_t k = 0; k < m; ++k) {
            double mean = acc[k] / b;
            se[k] = std::sqrt(std::max(0.0, (acc2[k] - b * mean * mean) / (b - 1.0)));
        }
        curve.std_err = std::move(se);
    }
    return curve;
}

DephasingCurve simulate_curve(const NoiseSpec &spec, const TimeGrid &grid, double omega0, std::size_t n,
                              std::uint64_t master_seed, int threads) {
    spec.validate();
    check_omega0(omega0);
    require(n >= 1, "run.n_realizations: must be at least 1");
    PathSampler sampler(spec, grid);
    PhasorSums sums = reduce_chunked(n, grid.size(), omega0, threads, SampledRows{&sampler, master_seed});
    return curve_from_sums(grid, omega0, sums);
}

DephasingCurve analytic_curve(const TimeGrid &grid, double omega0, std::vector<double> d_values) {
    require(d_values.size() == grid.size(), "analytic_curve: value count must match the grid");
    DephasingCurve curve;
    curve.grid = grid;
    curve.omega0 = omega0;
    curve.phasor.resize(d_values.size());
    for (std::size_t k = 0; k < d_values.size(); ++k) {
        curve.phasor[k] = d_values[k];
    }
    curve.d_values = std::move(d_values);
    return curve;
}

CurveBands band_statistics(const std::vector<std::vector<double>> &members) {
    require(members.size() >= 2, "run.n_curves: band statistics need at least 2 curves");
    std::size_t m = members.front().size();
    for (const auto &row : members) {
        require(row.size() == m, "band_statistics: member curves differ in length");
    }
    double nc = static_cast<double>(members.size());
    CurveBands b;
    b.mean.assign(m, 0.0);
    b.sd.assign(m, 0.0);
    for (const auto &row : members) {
        for (std::size_t k = 0; k < m; ++k) {
            b.mean[k] += row[k];
        }
    }
    for (auto &v : b.mean) {
        v /= nc;
    }
    for (const auto &row : members) {
        for (std::size_t k = 0; k < m; ++k) {
            double d = row[k] - b.mean[k];
            b.sd[k] += d * d;
        }
    }
    b.lo1.resize(m);
    b.hi1.resize(m);
    b.lo2.resize(m);
    b.hi2.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        b.sd[k] = std::sqrt(b.sd[k] / (nc - 1.0));
        b.lo1[k] = clamp01(b.mean[k] - b.sd[k]);
        b.hi1[k] = clamp01(b.mean[k] + b.sd[k]);
        b.lo2[k] = clamp01(b.mean[k] - 2.0 * b.sd[k]);
        b.hi2[k] = clamp01(b.mean[k] + 2.0 * b.sd[k]);
    }
    return b;
}

CurveEnsemble curve_ensemble(const NoiseSpec &spec, const TimeGrid &grid, double omega0, std::size_t n_curves,
                             std::size_t n_real_per_curve, std::uint64_t master_seed, int threads) {
    spec.validate();
    check_omega0(omega0);
    require(n_curves >= 2, "run.n_curves: must be at least 2");
    require(n_real_per_curve >= 1, "run.n_realizations: must be at least 1");
    std::size_t m = grid.size();
    PathSampler sampler(spec, grid);
    std::vector<PhasorSums> per_curve(n_curves, PhasorSums(m));
    for_each_chunk(
        n_curves, threads,
        [&](std::size_t, std::size_t begin, std::size_t end) {
            for (std::size_t c = begin; c < end; ++c) {
                SampledRows rows{&sampler, derive_key(master_seed, c)};
                per_curve[c] = reduce_chunked(n_real_per_curve, m, omega0, 1, rows);
            }
        },
        1);
    PhasorSums pooled(m);
    CurveEnsemble out;
    out.members.reserve(n_curves);
    for (const auto &s : per_curve) {
        pooled.merge(s);
        out.members.push_back(curve_from_sums(grid, omega0, s).d_values);
    }
    out.pooled = curve_from_sums(grid, omega0, pooled);
    out.pooled.bands = band_statistics(out.members);
    return out;
}

DephasingCurve curve_ensemble_stats(const NoiseSpec &spec, const TimeGrid &grid, double omega0,
                                    std::size_t n_curves, std::size_t n_real_per_curve,
                                    std::uint64_t master_seed, int threads) {
    return curve_ensemble(spec, grid, omega0, n_curves, n_real_per_curve, master_seed, threads).pooled;
}

void QubitState::validate(double tol) const {
    require(std::abs(rho[0][0].imag()) <= tol && std::abs(rho[1][1].imag()) <= tol,
            "QubitState: diagonal entries must be real");
    require(std::abs(rho[0][1] - std::conj(rho[1][0])) <= tol, "QubitState: matrix must be Hermitian");
    double a = rho[0][0].real();
    double d = rho[1][1].real();
    require(std::abs(a + d - 1.0) <= tol, "QubitState: trace must be 1");
    double half_gap = std::hypot(0.5 * (a - d), std::abs(rho[1][0]));
    require(0.5 * (a + d) - half_gap >= -tol, "QubitState: matrix must be positive semidefinite");
}

QubitState QubitState::from_matrix(std::complex<double> r00, std::complex<double> r01, std::complex<double> r10,
                                   std::complex<double> r11) {
    QubitState q{{{r00, r01}, {r10, r11}}};
    q.validate();
    return q;
}

QubitState QubitState::zero() {
    return from_matrix(1.0, 0.0, 0.0, 0.0);
}

QubitState QubitState::one() {
    return from_matrix(0.0, 0.0, 0.0, 1.0);
}

QubitState QubitState::plus() {
    return from_matrix(0.5, 0.5, 0.5, 0.5);
}

QubitState QubitState::minus() {
    return from_matrix(0.5, -0.5, -0.5, 0.5);
}

QubitState evolve_state(const QubitState &rho0, const DephasingCurve &curve, std::size_t k) {
    rho0.validate();
    require(k < curve.phasor.size(), "evolve_state: grid index out of range");
    QubitState out = rho0;
    out.rho[1][0] = rho0.rho[1][0] * curve.phasor[k];
    out.rho[0][1] = rho0.rho[0][1] * std::conj(curve.phasor[k]);
    return out;
}

double trace_distance(const QubitState &a, const QubitState &b) {
    a.validate();
    b.validate();
    double p = a.rho[0][0].real() - b.rho[0][0].real();
    double q = a.rho[1][1].real() - b.rho[1][1].real();
    std::complex<double> off = a.rho[1][0] - b.rho[1][0];
    double center = 0.5 * (p + q);
    double radius = std::hypot(0.5 * (p - q), std::abs(off));
    return 0.5 * (std::abs(center + radius) + std::abs(center - radius));
}

}  // namespace qdeph
