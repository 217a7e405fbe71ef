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

#ifndef QDEPH_NM_ANALYSIS_H
#define QDEPH_NM_ANALYSIS_H

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdeph/dephasing.h"

namespace qdeph {

/// Absolute rise threshold used when a curve carries no standard errors.
inline constexpr double kAbsoluteRevivalThreshold = 1e-9;

/// A rise of a sequence from index i_min to index i_max.
struct Swing {
    std::size_t i_min = 0;
    std::size_t i_max = 0;
    double rise = 0.0;
};

/// Rises between each grid-local minimum and the following grid-local
/// maximum, i.e. maximal non-decreasing runs, kept when the rise exceeds
/// thr(a, b). With se empty, thr = floor; otherwise
/// thr(a, b) = max(significance * sqrt(se[a]^2 + se[b]^2), floor).
/// Extrema are grid points; nothing is interpolated.
std::vector<Swing> significant_rises(std::span<const double> values, std::span<const double> se,
                                     double significance, double floor = kAbsoluteRevivalThreshold);

/// Hysteresis scan with the same threshold: tracks the running minimum, opens
/// a rise when a value exceeds it by more than thr(min, k), and closes it once
/// the sequence falls from its running maximum by more than thr(max, k), or
/// at the end of the data. Wiggles below the threshold do not split a rise.
std::vector<Swing> hysteresis_rises(std::span<const double> values, std::span<const double> se,
                                    double significance, double floor = kAbsoluteRevivalThreshold);

struct Revival {
    double t_start = 0.0;
    double t_end = 0.0;
    std::size_t i_start = 0;
    std::size_t i_end = 0;
    double depth = 0.0;
};

enum class Verdict { markovian, non_markovian };
std::string_view to_string(Verdict v);

/// How the rise threshold was set for a report.
struct ThresholdPolicy {
    double significance = 3.0;
    /// True when pointwise standard errors gated the rises.
    bool statistical = false;
    double absolute_floor = kAbsoluteRevivalThreshold;

    std::string describe() const;
};

struct RevivalReport {
    std::vector<Revival> revivals;
    double nm_measure = 0.0;
    Verdict verdict = Verdict::markovian;
    ThresholdPolicy policy;
};

/// Finds the significant revivals of D(t). Requires at least three points
/// and significance > 0.
RevivalReport detect_revivals(const DephasingCurve &curve, double significance = 3.0);

/// Sum of the revival depths; zero exactly when the verdict is Markovian.
double nm_measure(const DephasingCurve &curve, double significance = 3.0);

}  // namespace qdeph

#endif
