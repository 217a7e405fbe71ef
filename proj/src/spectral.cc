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

#include "qdeph/spectral.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "qdeph/nm_analysis.h"
#include "qdeph/parallel.h"

namespace qdeph {

namespace {

constexpr std::size_t kMinSegment = 64;

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

// FFTW's planner is not reentrant.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

template <class T>
struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : ptr(static_cast<T *>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
        if (!ptr) {
            throw std::bad_alloc();
        }
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer &) = delete;
    FftwBuffer &operator=(const FftwBuffer &) = delete;
    T *ptr;
};

class RealForwardPlan {
   public:
    explicit RealForwardPlan(std::size_t n) : n_(n) {
        FftwBuffer<double> in(n);
        FftwBuffer<fftw_complex> out(n / 2 + 1);
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.ptr, out.ptr, FFTW_ESTIMATE);
        if (!plan_) {
            throw std::runtime_error("fftw: failed to create r2c plan");
        }
    }
    ~RealForwardPlan() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    RealForwardPlan(const RealForwardPlan &) = delete;
    RealForwardPlan &operator=(const RealForwardPlan &) = delete;

    /// Thread-safe; both buffers must come from fftw_malloc.
    void execute(double *in, fftw_complex *out) const { fftw_execute_dft_r2c(plan_, in, out); }
    std::size_t size() const { return n_; }

   private:
    std::size_t n_;
    fftw_plan plan_;
};

std::size_t cut_index(const TimeGrid &grid, double transient_cut) {
    require(std::isfinite(transient_cut) && transient_cut >= 0.0, "spectrum.transient_cut: must be finite and >= 0");
    require(transient_cut < grid.t_max(), "spectrum.transient_cut: must be smaller than grid.t_max");
    return static_cast<std::size_t>(std::ceil(transient_cut / grid.dt() - 1e-9));
}

std::vector<double> make_window(Window window, std::size_t m) {
    std::vector<double> w(m, 1.0);
    if (window == Window::hann) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(m - 1));
            w[j] = s * s;
        }
    }
    return w;
}

struct PeriodogramSums {
    std::size_t n = 0;
    double sum_sq = 0.0;
    std::vector<double> p, p2;
    explicit PeriodogramSums(std::size_t bins = 0) : p(bins, 0.0), p2(bins, 0.0) {}
    void merge(const PeriodogramSums &o) {
        n += o.n;
        sum_sq += o.sum_sq;
        for (std::size_t k = 0; k < p.size(); ++k) {
            p[k] += o.p[k];
            p2[k] += o.p2[k];
        }
    }
};

// Shared driver: row_for(state, i) returns the full-grid values of path i.
template <class RowSource>
SpectrumEstimate periodogram_impl(const TimeGrid &grid, std::size_t n, double transient_cut, Window window,
                                  std::optional<double> omega_max, int threads, const RowSource &source) {
    require(n >= 1, "periodogram: ensemble is empty");
    double dt = grid.dt();
    double nyquist = std::numbers::pi / dt;
    if (omega_max) {
        require(*omega_max <= nyquist, "periodogram: requested band up to omega=" + std::to_string(*omega_max) +
                                           " exceeds the Nyquist frequency " + std::to_string(nyquist) +
                                           " of the grid");
    }
    std::size_t i0 = cut_index(grid, transient_cut);
    require(i0 < grid.size() && grid.size() - i0 >= kMinSegment,
            "periodogram: fewer than 64 samples remain after the transient cut");
    std::size_t m = grid.size() - i0;
    std::size_t bins = m / 2 + 1;
    std::vector<double> w = make_window(window, m);
    double wsum2 = 0.0;
    for (double v : w) {
        wsum2 += v * v;
    }
    double scale = dt / (2.0 * std::numbers::pi * wsum2);
    RealForwardPlan plan(m);

    std::vector<PeriodogramSums> partial(chunk_count(n), PeriodogramSums(bins));
    for_each_chunk(n, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        FftwBuffer<double> in(m);
        FftwBuffer<fftw_complex> out(bins);
        auto state = source.make_state();
        PeriodogramSums &acc = partial[chunk];
        for (std::size_t i = begin; i < end; ++i) {
            std::span<const double> row = source(state, i);
            for (std::size_t j = 0; j < m; ++j) {
                double x = row[i0 + j];
                if (!std::isfinite(x)) {
                    throw std::runtime_error("periodogram: non-finite value in path " + std::to_string(i));
                }
                acc.sum_sq += x * x;
                in.ptr[j] = w[j] * x;
            }
            plan.execute(in.ptr, out.ptr);
            for (std::size_t k = 0; k < bins; ++k) {
                double pk = scale * (out.ptr[k][0] * out.ptr[k][0] + out.ptr[k][1] * out.ptr[k][1]);
                acc.p[k] += pk;
                acc.p2[k] += pk * pk;
            }
            ++acc.n;
        }
    });
    PeriodogramSums total(bins);
    for (const auto &p : partial) {
        total.merge(p);
    }

    SpectrumEstimate est;
    est.n_segments = n;
    est.segment_length = m;
    est.transient_cut = transient_cut;
    est.window = window;
    double nd = static_cast<double>(n);
    est.sample_variance = total.sum_sq / (nd * static_cast<double>(m));
    est.bin_width = 2.0 * std::numbers::pi / (static_cast<double>(m) * dt);
    est.omegas.resize(bins);
    est.s_values.resize(bins);
    est.std_err.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        est.omegas[k] = est.bin_width * static_cast<double>(k);
        double mean = total.p[k] / nd;
        est.s_values[k] = mean;
        double var = n > 1 ? std::max(0.0, (total.p2[k] - nd * mean * mean) / (nd - 1.0)) : 0.0;
        est.std_err[k] = std::sqrt(var / nd);
    }
    return est;
}

struct StoredValues {
    const TrajectoryEnsemble *ens;
    int make_state() const { return 0; }
    std::span<const double> operator()(int, std::size_t i) const { return ens->row(i); }
};

struct SampledValues {
    const PathSampler *sampler;
    std::uint64_t key;
    struct State {
        std::vector<double> values, integrals;
    };
    State make_state() const {
        std::size_t m = sampler->grid().size();
        return {std::vector<double>(m), std::vector<double>(m)};
    }
    std::span<const double> operator()(State &st, std::size_t i) const {
        sampler->sample(key, i, st.values, st.integrals);
        return st.values;
    }
};

}  // namespace

std::string_view to_string(Window w) {
    return w == Window::hann ? "hann" : "rectangular";
}

Window parse_window(std::string_view text) {
    if (text == "hann") return Window::hann;
    if (text == "rectangular" || text == "rect") return Window::rectangular;
    throw std::invalid_argument("spectrum.window: unknown window '" + std::string(text) +
                                "' (expected hann or rectangular)");
}

double default_transient_cut(const NoiseSpec &spec) {
    double r = spec.min_rate();
    require(r > 0.0, "spectrum.transient_cut: no positive rate to derive a default from");
    return 10.0 / r;
}

AutocorrEstimate autocorr_estimate(const TrajectoryEnsemble &ensemble, double max_lag, double transient_cut) {
    require(ensemble.n_paths >= 1, "autocorr_estimate: ensemble is empty");
    const TimeGrid &grid = ensemble.grid;
    std::size_t i0 = cut_index(grid, transient_cut);
    require(std::isfinite(max_lag) && max_lag >= 0.0, "autocorr.max_lag: must be finite and >= 0");
    require(max_lag < grid.t_max() - transient_cut, "autocorr.max_lag: must be smaller than t_max - transient_cut");
    require(i0 + 2 <= grid.size(), "autocorr_estimate: insufficient samples after the transient cut");
    std::size_t m = grid.size() - i0;
    std::size_t lags = std::min(m - 1, static_cast<std::size_t>(std::floor(max_lag / grid.dt() + 1e-9))) + 1;

    // Linear correlation via a zero-padded transform; power spectra of all
    // paths are summed before the single inverse transform.
    std::size_t p = 1;
    while (p < 2 * m) {
        p *= 2;
    }
    std::size_t bins = p / 2 + 1;
    RealForwardPlan fwd(p);
    std::vector<std::vector<double>> partial_power(chunk_count(ensemble.n_paths), std::vector<double>(bins, 0.0));
    std::vector<double> partial_zero(chunk_count(ensemble.n_paths), 0.0);
    for_each_chunk(ensemble.n_paths, 1, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        FftwBuffer<double> in(p);
        FftwBuffer<fftw_complex> out(bins);
        for (std::size_t i = begin; i < end; ++i) {
            auto row = ensemble.row(i);
            std::fill(in.ptr, in.ptr + p, 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                double x = row[i0 + j];
                require(std::isfinite(x), "autocorr_estimate: non-finite value in ensemble");
                in.ptr[j] = x;
                partial_zero[chunk] += x * x;
            }
            fwd.execute(in.ptr, out.ptr);
            for (std::size_t k = 0; k < bins; ++k) {
                partial_power[chunk][k] += out.ptr[k][0] * out.ptr[k][0] + out.ptr[k][1] * out.ptr[k][1];
            }
        }
    });
    FftwBuffer<fftw_complex> spec(bins);
    FftwBuffer<double> corr(p);
    double zero_lag = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
        spec.ptr[k][0] = 0.0;
        spec.ptr[k][1] = 0.0;
    }
    for (std::size_t c = 0; c < partial_power.size(); ++c) {
        zero_lag += partial_zero[c];
        for (std::size_t k = 0; k < bins; ++k) {
            spec.ptr[k][0] += partial_power[c][k];
        }
    }
    {
        fftw_plan inv;
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            inv = fftw_plan_dft_c2r_1d(static_cast<int>(p), spec.ptr, corr.ptr, FFTW_ESTIMATE);
        }
        fftw_execute(inv);
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(inv);
    }
    double norm = static_cast<double>(ensemble.n_paths) * static_cast<double>(m);
    AutocorrEstimate est;
    est.transient_cut = transient_cut;
    est.n_paths = ensemble.n_paths;
    est.taus.resize(lags);
    est.values.resize(lags);
    for (std::size_t l = 0; l < lags; ++l) {
        est.taus[l] = grid.dt() * static_cast<double>(l);
        est.values[l] = corr.ptr[l] / static_cast<double>(p) / norm;
    }
    est.values[0] = zero_lag / norm;
    return est;
}

SpectrumEstimate periodogram(const TrajectoryEnsemble &ensemble, double transient_cut, Window window,
                             std::optional<double> omega_max, int threads) {
    require(ensemble.values.size() == ensemble.n_paths * ensemble.grid.size(),
            "periodogram: value matrix has the wrong size");
    return periodogram_impl(ensemble.grid, ensemble.n_paths, transient_cut, window, omega_max, threads,
                            StoredValues{&ensemble});
}

SpectrumEstimate simulate_periodogram(const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t master_seed,
                                      std::size_t n, double transient_cut, Window window,
                                      std::optional<double> omega_max, int threads) {
    spec.validate();
    PathSampler sampler(spec, grid);
    return periodogram_impl(grid, n, transient_cut, window, omega_max, threads,
                            SampledValues{&sampler, master_seed});
}

double spectrum_integral(const SpectrumEstimate &est) {
    require(est.bin_width > 0.0 && !est.s_values.empty(), "spectrum_integral: needs a raw periodogram");
    std::size_t bins = est.s_values.size();
    double sum = est.s_values[0];
    bool has_nyquist = est.segment_length % 2 == 0;
    std::size_t last = has_nyquist ? bins - 1 : bins;
    for (std::size_t k = 1; k < last; ++k) {
        sum += 2.0 * est.s_values[k];
    }
    if (has_nyquist && bins > 1) {
        sum += est.s_values[bins - 1];
    }
    return sum * est.bin_width;
}

SpectrumEstimate log_band_average(const SpectrumEstimate &est, double omega_min, double ratio) {
    require(omega_min > 0.0 && ratio > 1.0, "log_band_average: need omega_min > 0 and ratio > 1");
    SpectrumEstimate out = est;
    out.omegas.clear();
    out.s_values.clear();
    out.std_err.clear();
    out.bin_width = 0.0;
    std::size_t k = 0;
    if (!est.omegas.empty() && est.omegas[0] == 0.0) {
        out.omegas.push_back(0.0);
        out.s_values.push_back(est.s_values[0]);
        out.std_err.push_back(est.std_err[0]);
        k = 1;
    }
    while (k < est.omegas.size() && est.omegas[k] < omega_min) {
        ++k;
    }
    double edge = omega_min;
    while (k < est.omegas.size()) {
        double upper = edge * ratio;
        double sw = 0.0, ss = 0.0, se2 = 0.0;
        std::size_t count = 0;
        while (k < est.omegas.size() && est.omegas[k] < upper) {
            sw += est.omegas[k];
            ss += est.s_values[k];
            se2 += est.std_err[k] * est.std_err[k];
            ++count;
            ++k;
        }
        if (count > 0) {
            double c = static_cast<double>(count);
            out.omegas.push_back(sw / c);
            out.s_values.push_back(ss / c);
            out.std_err.push_back(std::sqrt(se2) / c);
        }
        edge = upper;
    }
    return out;
}

double peak_frequency(const SpectrumEstimate &est, double omega_lo, double omega_hi, double log_half_width) {
    require(omega_lo > 0.0 && omega_hi > omega_lo, "peak_frequency: need 0 < omega_lo < omega_hi");
    require(log_half_width > 0.0, "peak_frequency: log_half_width must be > 0");
    std::size_t best = est.omegas.size();
    for (std::size_t k = 0; k < est.omegas.size(); ++k) {
        if (est.omegas[k] >= omega_lo && est.omegas[k] <= omega_hi &&
            (best == est.omegas.size() || est.s_values[k] > est.s_values[best])) {
            best = k;
        }
    }
    require(best < est.omegas.size(), "peak_frequency: no bins in the requested range");
    double center = std::log(est.omegas[best]);
    for (int iter = 0; iter < 50; ++iter) {
        // Least squares of ln S = a + b u + c u^2, u = ln w - center.
        double m[3][4] = {};
        std::size_t used = 0;
        for (std::size_t k = 0; k < est.omegas.size(); ++k) {
            if (est.omegas[k] <= 0.0 || est.s_values[k] <= 0.0) continue;
            double u = std::log(est.omegas[k]) - center;
            if (std::abs(u) > log_half_width) continue;
            double y = std::log(est.s_values[k]);
            double basis[3] = {1.0, u, u * u};
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
                m[r][3] += basis[r] * y;
            }
            ++used;
        }
        if (used < 5) break;
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r) {
                if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
            }
            std::swap(m[col], m[piv]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                double f = m[r][col] / m[col][col];
                for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
            }
        }
        double b = m[1][3] / m[1][1];
        double c = m[2][3] / m[2][2];
        if (!(c < 0.0)) break;
        double shift = std::clamp(-b / (2.0 * c), -0.5 * log_half_width, 0.5 * log_half_width);
        center += shift;
        if (std::abs(shift) < 1e-12) break;
    }
    return std::clamp(std::exp(center), omega_lo, omega_hi);
}

std::size_t count_significant_peaks(const SpectrumEstimate &est, double significance) {
    std::span<const double> v(est.s_values);
    std::span<const double> se(est.std_err);
    auto rises = hysteresis_rises(v, se, significance, 0.0);
    std::size_t peaks = 0;
    for (const Swing &s : rises) {
        // A peak needs a significant fall after its maximum.
        bool falls = false;
        for (std::size_t k = s.i_max + 1; k < v.size() && !falls; ++k) {
            falls = v[s.i_max] - v[k] > significance * std::hypot(se[s.i_max], se[k]);
        }
        if (falls) ++peaks;
    }
    return peaks;
}

}  // namespace qdeph
