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

#ifndef QDEPH_DEPHASING_H
#define QDEPH_DEPHASING_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qdeph/noise.h"

namespace qdeph {

/// Time integrals of every realization at the output grid points.
/// Row-major [path][k]; column 0 is identically zero.
struct IntegratedEnsemble {
    TimeGrid grid{1.0, 2};
    std::size_t n_paths = 0;
    std::vector<double> values;

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * grid.size(), grid.size()};
    }
};

/// Integrates each path of `ensemble`.
///
/// Sampler-produced ensembles carry integrals accumulated at full substep
/// resolution and these are used as is. Otherwise the cumulative trapezoid
/// rule is applied on the output grid. Throws std::invalid_argument on an
/// empty ensemble or non-finite values.
IntegratedEnsemble integrate_paths(const TrajectoryEnsemble &ensemble);

enum class ErrorMethod {
    delta,      ///< Delta-method standard error of |mean phasor|.
    bootstrap,  ///< 200 deterministic bootstrap resamples.
};

/// Pointwise band statistics of a set of D(t) curves, clamped to [0, 1].
struct CurveBands {
    std::vector<double> mean;
    std::vector<double> sd;
    std::vector<double> lo1, hi1;
    std::vector<double> lo2, hi2;
};

/// D(t) on a grid together with the complex mean phasor it came from.
struct DephasingCurve {
    TimeGrid grid{1.0, 2};
    double omega0 = 1.0;
    /// c(t_k) = E[exp(-2 i omega0 X(t_k))]; d_values[k] = |c(t_k)|.
    std::vector<std::complex<double>> phasor;
    std::vector<double> d_values;
    std::optional<std::vector<double>> std_err;
    std::optional<CurveBands> bands;
    std::size_t n_realizations = 0;
};

/// Running sums of the phasor components at each grid point. Reductions are
/// always performed chunk by chunk in a fixed order.
struct PhasorSums {
    std::size_t n = 0;
    std::vector<double> c, s, cc, ss, cs;

    explicit PhasorSums(std::size_t points = 0);
    /// Adds one realization's integrated path.
    void add_path(std::span<const double> integral, double omega0);
    void merge(const PhasorSums &other);
};

/// Builds a curve (delta-method errors) from accumulated sums.
DephasingCurve curve_from_sums(const TimeGrid &grid, double omega0, const PhasorSums &sums);

/// D(t) from an integrated ensemble. The bootstrap resampling stream is keyed
/// by `bootstrap_seed`.
DephasingCurve dephasing_factor(const IntegratedEnsemble &integrated, double omega0,
                                ErrorMethod method = ErrorMethod::delta, std::uint64_t bootstrap_seed = 0);

/// Samples and reduces `n` realizations without storing the ensemble.
/// Bit-identical to integrate_paths + dephasing_factor on the same inputs.
DephasingCurve simulate_curve(const NoiseSpec &spec, const TimeGrid &grid, double omega0, std::size_t n,
                              std::uint64_t master_seed, int threads = 1);

/// Wraps closed-form values as a noiseless curve (real phasor, no errors).
DephasingCurve analytic_curve(const TimeGrid &grid, double omega0, std::vector<double> d_values);

/// Result of the multi-curve protocol: the pooled curve with bands attached,
/// plus the individual member curves.
struct CurveEnsemble {
    DephasingCurve pooled;
    std::vector<std::vector<double>> members;
};

/// Runs n_curves independent curves of n_real_per_curve realizations each.
/// Curve c uses key derive_key(master_seed, c). The returned curve's
/// d_values and std_err pool all realizations; its bands hold the pointwise
/// mean and the mean +- 1 and 2 standard deviations of the member curves.
CurveEnsemble curve_ensemble(const NoiseSpec &spec, const TimeGrid &grid, double omega0, std::size_t n_curves,
                             std::size_t n_real_per_curve, std::uint64_t master_seed, int threads = 1);

/// Convenience wrapper returning only the pooled curve with bands.
DephasingCurve curve_ensemble_stats(const NoiseSpec &spec, const TimeGrid &grid, double omega0,
                                    std::size_t n_curves, std::size_t n_real_per_curve,
                                    std::uint64_t master_seed, int threads = 1);

/// Band statistics of member curves (each of equal length, at least two).
CurveBands band_statistics(const std::vector<std::vector<double>> &members);

/// 2x2 density matrix in the sigma_z eigenbasis, rho[row][col].
struct QubitState {
    std::complex<double> rho[2][2];

    /// Throws std::invalid_argument unless Hermitian, unit trace and
    /// positive semidefinite (eigenvalues >= -tol).
    void validate(double tol = 1e-12) const;

    static QubitState from_matrix(std::complex<double> r00, std::complex<double> r01, std::complex<double> r10,
                                  std::complex<double> r11);
    static QubitState zero();
    static QubitState one();
    static QubitState plus();
    static QubitState minus();
};

/// Applies the dephasing map at grid index k: populations unchanged,
/// rho10 -> rho10 * c(t_k), rho01 -> rho01 * conj(c(t_k)).
QubitState evolve_state(const QubitState &rho0, const DephasingCurve &curve, std::size_t k);

/// Half the trace norm of a - b.
double trace_distance(const QubitState &a, const QubitState &b);

}  // namespace qdeph

#endif
