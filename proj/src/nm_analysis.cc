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

#include "qdeph/nm_analysis.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qdeph {

namespace {

void check_se(std::span<const double> values, std::span<const double> se, const char *who) {
    if (!se.empty() && se.size() != values.size()) {
        throw std::invalid_argument(std::string(who) + ": standard-error count must match the values");
    }
}

}  // namespace

std::vector<Swing> significant_rises(std::span<const double> values, std::span<const double> se,
                                     double significance, double floor) {
    check_se(values, se, "significant_rises");
    std::vector<Swing> out;
    std::size_t k = 0;
    while (k + 1 < values.size()) {
        if (!(values[k + 1] > values[k])) {
            ++k;
            continue;
        }
        std::size_t i_min = k;
        while (k + 1 < values.size() && values[k + 1] >= values[k]) {
            ++k;
        }
        double rise = values[k] - values[i_min];
        double thr = se.empty() ? floor : std::max(significance * std::hypot(se[i_min], se[k]), floor);
        if (rise > thr) {
            out.push_back({i_min, k, rise});
        }
    }
    return out;
}

std::vector<Swing> hysteresis_rises(std::span<const double> values, std::span<const double> se,
                                     double significance, double floor) {
    check_se(values, se, "hysteresis_rises");
    auto thr = [&](std::size_t a, std::size_t b) {
        if (se.empty()) {
            return floor;
        }
        return std::max(significance * std::hypot(se[a], se[b]), floor);
    };
    std::vector<Swing> out;
    if (values.empty()) {
        return out;
    }
    bool rising = false;
    std::size_t i_min = 0;
    std::size_t i_max = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (!rising) {
            if (values[k] < values[i_min]) {
                i_min = k;
            } else if (values[k] - values[i_min] > thr(i_min, k)) {
                rising = true;
                i_max = k;
            }
        } else {
            if (values[k] > values[i_max]) {
                i_max = k;
            } else if (values[i_max] - values[k] > thr(i_max, k)) {
                out.push_back({i_min, i_max, values[i_max] - values[i_min]});
                rising = false;
                i_min = k;
            }
        }
    }
    if (rising) {
        out.push_back({i_min, i_max, values[i_max] - values[i_min]});
    }
    return out;
}

std::string_view to_string(Verdict v) {
    return v == Verdict::markovian ? "Markovian" : "NonMarkovian";
}

std::string ThresholdPolicy::describe() const {
    std::ostringstream os;
    if (statistical) {
        os << "rise > max(" << significance << " * sqrt(se_min^2 + se_max^2), " << absolute_floor << ")";
    } else {
        os << "rise > " << absolute_floor << " (no standard errors)";
    }
    return os.str();
}

RevivalReport detect_revivals(const DephasingCurve &curve, double significance) {
    if (curve.d_values.size() < 3) {
        throw std::invalid_argument("detect_revivals: curve needs at least 3 points");
    }
    if (!(significance > 0.0) || !std::isfinite(significance)) {
        throw std::invalid_argument("run.significance: must be finite and > 0");
    }
    RevivalReport report;
    report.policy.significance = significance;
    report.policy.statistical = curve.std_err.has_value();
    std::span<const double> se;
    if (curve.std_err) {
        se = *curve.std_err;
    }
    for (const Swing &s : significant_rises(curve.d_values, se, significance)) {
        report.revivals.push_back(
            {curve.grid.time(s.i_min), curve.grid.time(s.i_max), s.i_min, s.i_max, s.rise});
        report.nm_measure += s.rise;
    }
    report.verdict = report.revivals.empty() ? Verdict::markovian : Verdict::non_markovian;
    return report;
}

double nm_measure(const DephasingCurve &curve, double significance) {
    return detect_revivals(curve, significance).nm_measure;
}

}  // namespace qdeph
