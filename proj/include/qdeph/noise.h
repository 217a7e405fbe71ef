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

#ifndef QDEPH_NOISE_H
#define QDEPH_NOISE_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdeph {

enum class NoiseKind {
    ou,            ///< Ornstein-Uhlenbeck, friction gamma, diffusion sigma.
    rtn,           ///< Random telegraph noise, values +-1, switching rate gamma.
    filtered_ou,   ///< dY = -kappa Y dt + dX_OU.
    filtered_rtn,  ///< dZ = -mu Z dt + dX_RTN.
};

std::string_view to_string(NoiseKind kind);
/// Accepts "ou", "rtn", "filtered_ou" (alias "y"), "filtered_rtn" (alias "z").
NoiseKind parse_noise_kind(std::string_view text);

/// Tagged description of one of the four noise processes.
///
/// Rates are in units of 1/time, sigma in noise-units * time^-1/2. Which of
/// sigma/kappa/mu is present is fixed by `kind`; `validate()` rejects any
/// mismatch. The factory functions are the intended way to build one.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::ou;
    double gamma = 0.0;
    std::optional<double> sigma;
    std::optional<double> kappa;
    std::optional<double> mu;

    static NoiseSpec ou(double gamma, double sigma);
    static NoiseSpec rtn(double gamma);
    static NoiseSpec filtered_ou(double gamma, double sigma, double kappa);
    static NoiseSpec filtered_rtn(double gamma, double mu);

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    /// Largest rate among gamma, kappa, mu.
    double max_rate() const;
    /// Smallest strictly positive rate among gamma, kappa, mu (0 if none).
    double min_rate() const;

    bool operator==(const NoiseSpec &) const = default;
};

/// Uniform grid on [0, t_max] with n_out output points and `substeps`
/// integration steps per output interval.
class TimeGrid {
   public:
    TimeGrid(double t_max, std::size_t n_out, std::size_t substeps = 1);

    /// Picks the smallest substep count with h <= 0.05 / spec.max_rate().
    static TimeGrid with_default_substeps(double t_max, std::size_t n_out, const NoiseSpec &spec);

    double t_max() const { return t_max_; }
    std::size_t size() const { return n_out_; }
    std::size_t substeps() const { return substeps_; }
    double dt() const { return t_max_ / static_cast<double>(n_out_ - 1); }
    double h() const { return dt() / static_cast<double>(substeps_); }
    double time(std::size_t k) const;
    std::vector<double> times() const;

    bool operator==(const TimeGrid &) const = default;

   private:
    double t_max_;
    std::size_t n_out_;
    std::size_t substeps_;
};

/// N realizations of a process sampled on the output grid.
///
/// `values` is row-major [path][k]. When produced by a sampler, `integrals`
/// holds the time integral of each path at the output points, accumulated at
/// full sampler resolution; ensembles loaded from files may lack it.
struct TrajectoryEnsemble {
    NoiseSpec spec;
    TimeGrid grid{1.0, 2};
    std::uint64_t master_seed = 0;
    std::size_t n_paths = 0;
    std::vector<double> values;
    std::vector<double> integrals;
    std::vector<std::string> warnings;

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * grid.size(), grid.size()};
    }
    std::span<const double> integral_row(std::size_t i) const {
        return {integrals.data() + i * grid.size(), grid.size()};
    }
    bool has_integrals() const { return !integrals.empty(); }
};

/// Telegraph path in event form: the initial sign and the ordered switch
/// times inside [0, t_max].
struct TelegraphPath {
    double x0 = 1.0;
    std::vector<double> switch_times;
};

/// Draws the telegraph path used for realization `path_index` of an RTN or
/// FilteredRTN ensemble with this key.
TelegraphPath sample_telegraph_path(double gamma, double t_max, std::uint64_t key, std::uint64_t path_index);

/// Exact values and running integral of a telegraph path at the grid points.
/// Between switches the integral is linear, so no quadrature error arises.
void integrate_telegraph(const TelegraphPath &path, const TimeGrid &grid, std::span<double> values,
                         std::span<double> integrals);

/// Per-path sampler with the transition coefficients precomputed.
///
/// OU and FilteredOU use the exact Gaussian transition of the linear system
/// over one substep. RTN and FilteredRTN are event driven and exact at the
/// grid points; for them `substeps` has no effect.
class PathSampler {
   public:
    PathSampler(const NoiseSpec &spec, const TimeGrid &grid);

    /// Fills one realization. Both spans must have grid.size() entries.
    void sample(std::uint64_t key, std::uint64_t path_index, std::span<double> values,
                std::span<double> integrals) const;

    const NoiseSpec &spec() const { return spec_; }
    const TimeGrid &grid() const { return grid_; }

   private:
    void sample_linear(std::uint64_t key, std::uint64_t path_index, std::span<double> values,
                       std::span<double> integrals) const;
    void sample_filtered_rtn(std::uint64_t key, std::uint64_t path_index, std::span<double> values,
                             std::span<double> integrals) const;

    NoiseSpec spec_;
    TimeGrid grid_;
    // x' = a x + l11 z1;  second' = c x + d second + l21 z1 + l22 z2
    double a_ = 0, c_ = 0, d_ = 0;
    double l11_ = 0, l21_ = 0, l22_ = 0;
};

/// Warnings for grids whose substep is coarse relative to the fastest rate
/// (h * max_rate > 0.1). Sampling still proceeds.
std::vector<std::string> grid_warnings(const NoiseSpec &spec, const TimeGrid &grid);

TrajectoryEnsemble sample_ou(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                             std::size_t n, int threads = 1);
TrajectoryEnsemble sample_rtn(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                              std::size_t n, int threads = 1);
TrajectoryEnsemble sample_filtered(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                                   std::size_t n, int threads = 1);
/// Dispatches on spec.kind.
TrajectoryEnsemble sample(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed, std::size_t n,
                          int threads = 1);

}  // namespace qdeph

#endif
