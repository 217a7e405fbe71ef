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

#ifndef QDEPH_SPECTRAL_H
#define QDEPH_SPECTRAL_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qdeph/noise.h"

namespace qdeph {

enum class Window { rectangular, hann };
std::string_view to_string(Window w);
Window parse_window(std::string_view text);

/// Lagged-product estimate of the stationary autocorrelation.
struct AutocorrEstimate {
    std::vector<double> taus;
    std::vector<double> values;
    double transient_cut = 0.0;
    std::size_t n_paths = 0;
};

/// Averages x(t) x(t + tau) over time origins after `transient_cut` and over
/// realizations, normalized by the post-cut sample count M at every lag.
/// Requires transient_cut < t_max and max_lag < t_max - transient_cut.
AutocorrEstimate autocorr_estimate(const TrajectoryEnsemble &ensemble, double max_lag, double transient_cut);

/// Power-spectrum estimate on the non-negative DFT frequencies.
///
/// s_values estimate the two-sided density S(omega) in angular frequency,
/// normalized so that S(-w) = S(w) and the integral over the real line equals
/// the variance. std_err is the standard error of the realization average.
struct SpectrumEstimate {
    std::vector<double> omegas;
    std::vector<double> s_values;
    std::vector<double> std_err;
    std::size_t n_segments = 0;
    std::size_t segment_length = 0;
    double transient_cut = 0.0;
    Window window = Window::hann;
    /// Mean of x^2 over post-cut samples and realizations.
    double sample_variance = 0.0;
    /// Frequency spacing 2 pi / (M dt); zero after band averaging.
    double bin_width = 0.0;
};

/// Default transient cut: 10 / (slowest positive rate of the noise).
double default_transient_cut(const NoiseSpec &spec);

/// Bartlett-averaged periodogram of the post-cut part of every path.
///
/// Requires at least 64 post-cut samples. When omega_max is given it must not
/// exceed the Nyquist frequency pi / dt.
SpectrumEstimate periodogram(const TrajectoryEnsemble &ensemble, double transient_cut, Window window = Window::hann,
                             std::optional<double> omega_max = std::nullopt, int threads = 1);

/// Samples and transforms realizations chunk by chunk without keeping the
/// ensemble. Matches periodogram() on the sampled ensemble exactly.
SpectrumEstimate simulate_periodogram(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                                      std::size_t n, double transient_cut, Window window = Window::hann,
                                      std::optional<double> omega_max = std::nullopt, int threads = 1);

/// Folded integral S(0) + 2 sum S(w_k) + S(w_nyq) times the bin width; the
/// discrete analogue of the integral over the whole real line.
double spectrum_integral(const SpectrumEstimate &est);

/// Averages bins into bands whose edges grow geometrically by `ratio`,
/// starting at omega_min. The zero-frequency bin is kept as its own band.
/// Returned omegas are band-mean frequencies; std_err is propagated assuming
/// independent bins.
SpectrumEstimate log_band_average(const SpectrumEstimate &est, double omega_min, double ratio);

/// Peak location in [omega_lo, omega_hi]: the bin maximum refined by an
/// iterated least-squares parabola of ln S against ln omega over a window
/// symmetric in ln omega (half width `log_half_width`).
double peak_frequency(const SpectrumEstimate &est, double omega_lo, double omega_hi,
                      double log_half_width = 0.5);

/// Number of significant local maxima of the estimate, using
/// the hysteresis rule of hysteresis_rises on (S, std_err).
std::size_t count_significant_peaks(const SpectrumEstimate &est, double significance);

}  // namespace qdeph

#endif
