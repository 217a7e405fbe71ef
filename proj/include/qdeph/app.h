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

#ifndef QDEPH_APP_H
#define QDEPH_APP_H

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdeph/analytic.h"
#include "qdeph/config.h"
#include "qdeph/nm_analysis.h"
#include "qdeph/noise.h"

namespace qdeph {

/// Process exit codes shared by every command.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
};

/// Preconfigured figure parameter set (omega0 = 1 throughout).
struct FigureDef {
    std::string name;
    std::string title;
    /// Dephasing figures: one spec. Spectrum figure: one spec per curve.
    std::vector<NoiseSpec> specs;
    double t_max = 40.0;
    std::size_t n_out = 201;
    std::size_t n_curves = 100;
    std::size_t n_real_per_curve = 100;
    std::optional<analytic::Formula> overlay;
    bool spectrum = false;
    double transient_cut = 0.0;
    std::size_t spectrum_paths = 1000;
};

const std::vector<FigureDef> &figure_defs();
/// Comma-separated list of figure names.
std::string figure_name_list();
const FigureDef *find_figure(std::string_view name);

struct FigureOptions {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int threads = 1;
    double significance = 3.0;
    std::string format = "csv";
};

/// Written artifacts plus the figure's headline numbers.
struct FigureResult {
    std::vector<std::string> files;
    /// Dephasing figures only.
    std::optional<RevivalReport> report;
    /// Fraction of grid points where the closed form lies in the 2-sigma band.
    std::optional<double> band_coverage;
    /// Spectrum figure only: fitted peak frequency per spec.
    std::vector<double> peak_omegas;
    std::string summary;
};

/// Runs one figure. Throws std::invalid_argument for an unknown name.
FigureResult run_figure(const FigureDef &fig, const FigureOptions &opts);

/// Analytic overlay for a dephasing spec, when a closed form exists.
std::optional<std::vector<double>> analytic_overlay(const NoiseSpec &spec, const TimeGrid &grid, double omega0);

int cmd_simulate(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_figure(std::string_view name, const FigureOptions &opts, std::ostream &out, std::ostream &err);
/// Suites: oracles, spectra, statistics, all.
int cmd_validate(std::string_view suite, std::uint64_t seed, int threads, std::ostream &out, std::ostream &err);

struct TabulateRequest {
    analytic::Formula formula = analytic::Formula::d_ou;
    analytic::AnalyticParams params;
    double x_min = 0.0;
    double x_max = 40.0;
    std::size_t points = 201;
    std::string format = "csv";
};

/// Emits `t,value` (or `omega,S` for spectra) to `out`.
int cmd_tabulate(const TabulateRequest &req, std::ostream &out, std::ostream &err);

}  // namespace qdeph

#endif
