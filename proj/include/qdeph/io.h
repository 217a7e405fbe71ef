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

#ifndef QDEPH_IO_H
#define QDEPH_IO_H

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qdeph/dephasing.h"
#include "qdeph/nm_analysis.h"
#include "qdeph/noise.h"
#include "qdeph/spectral.h"

namespace qdeph::io {

/// Ordered key/value provenance embedded in every artifact. CSV files carry
/// it as leading "# key = value" lines, JSON files as a "config" object.
using Provenance = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits, "%.17g".
std::string format_double(double v);

void write_comments(std::ostream &os, const Provenance &meta);

nlohmann::json spec_to_json(const NoiseSpec &spec);
NoiseSpec spec_from_json(const nlohmann::json &j);
nlohmann::json grid_to_json(const TimeGrid &grid);
TimeGrid grid_from_json(const nlohmann::json &j);
nlohmann::json provenance_to_json(const Provenance &meta);

/// CSV with header `t,x_1,...,x_N`, one row per grid point.
void write_ensemble_csv(std::ostream &os, const TrajectoryEnsemble &ens, const Provenance &meta);
/// Sidecar with spec, grid, seed and path count.
nlohmann::json ensemble_metadata(const TrajectoryEnsemble &ens, const Provenance &meta);
/// Reads an ensemble written by write_ensemble_csv together with its sidecar.
/// The result has no stored integrals.
TrajectoryEnsemble read_ensemble(std::istream &csv, const nlohmann::json &sidecar);

/// CSV `t,D,stderr,band_mean,band_lo1,band_hi1,band_lo2,band_hi2`; absent
/// columns are left empty.
void write_curve_csv(std::ostream &os, const DephasingCurve &curve, const Provenance &meta);
nlohmann::json curve_to_json(const DephasingCurve &curve, const Provenance &meta);

/// CSV `omega,S,stderr`.
void write_spectrum_csv(std::ostream &os, const SpectrumEstimate &est, const Provenance &meta);
nlohmann::json spectrum_to_json(const SpectrumEstimate &est, const Provenance &meta);

/// CSV `tau,value`.
void write_autocorr_csv(std::ostream &os, const AutocorrEstimate &est, const Provenance &meta);
nlohmann::json autocorr_to_json(const AutocorrEstimate &est, const Provenance &meta);

nlohmann::json report_to_json(const RevivalReport &report, const Provenance &meta);

/// Two-column table with the given header names.
void write_table_csv(std::ostream &os, const std::string &x_name, const std::string &y_name,
                     const std::vector<double> &x, const std::vector<double> &y, const Provenance &meta);

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error on failure.
void write_file(const std::string &path, const std::string &text);

}  // namespace qdeph::io

#endif
