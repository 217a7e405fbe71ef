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

#include "qdeph/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qdeph::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string fixed(double v, int digits = 2) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

// Comments may not contain "--".
std::string comment_safe(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '-' && !out.empty() && out.back() == '-') {
            out += ' ';
        }
        out += c;
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void finish() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-300) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

// Tick step from the 1-2-5 sequence giving about five ticks.
double tick_step(double span) {
    double raw = span / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

std::string tick_label(double v, double step) {
    int digits = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)));
    if (std::abs(v) < step * 1e-9) {
        v = 0.0;
    }
    return fixed(v, digits);
}

}  // namespace

std::string render(const Plot &plot) {
    Range xr, yr;
    for (const Band &b : plot.bands) {
        for (double v : b.x) xr.add(v);
        for (double v : b.lo) yr.add(v);
        for (double v : b.hi) yr.add(v);
    }
    for (const Series &s : plot.series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(v);
    }
    xr.finish();
    yr.finish();
    double pw = kWidth - kLeft - kRight;
    double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!--\n";
    for (const auto &[k, v] : plot.provenance) {
        os << comment_safe(k + " = " + v) << '\n';
    }
    os << "-->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0) << "\" height=\""
       << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' ' << fixed(kHeight, 0) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth, 0) << "\" height=\"" << fixed(kHeight, 0)
       << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << escape(plot.title) << "</text>\n";

    for (const Band &b : plot.bands) {
        os << "<polygon fill=\"" << b.color << "\" fill-opacity=\"" << fixed(b.opacity, 3)
           << "\" stroke=\"none\" points=\"";
        for (std::size_t k = 0; k < b.x.size(); ++k) {
            os << fixed(px(b.x[k])) << ',' << fixed(py(b.hi[k])) << ' ';
        }
        for (std::size_t k = b.x.size(); k-- > 0;) {
            os << fixed(px(b.x[k])) << ',' << fixed(py(b.lo[k])) << (k ? " " : "");
        }
        os << "\"/>\n";
    }

    os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    os << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(pw)
       << "\" height=\"" << fixed(ph) << "\"/>\n";
    double xs = tick_step(xr.hi - xr.lo);
    double ys = tick_step(yr.hi - yr.lo);
    std::ostringstream labels;
    for (double v = std::ceil(xr.lo / xs - 1e-9) * xs; v <= xr.hi + xs * 1e-9; v += xs) {
        double x = px(v);
        os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(x) << "\" y2=\""
           << fixed(kTop + ph + 5) << "\"/>\n";
        labels << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kTop + ph + 20)
               << "\" text-anchor=\"middle\">" << tick_label(v, xs) << "</text>\n";
    }
    for (double v = std::ceil(yr.lo / ys - 1e-9) * ys; v <= yr.hi + ys * 1e-9; v += ys) {
        double y = py(v);
        os << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(kLeft)
           << "\" y2=\"" << fixed(y) << "\"/>\n";
        labels << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">"
               << tick_label(v, ys) << "</text>\n";
    }
    os << "</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n" << labels.str();
    os << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 15)
       << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << fixed(kTop + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";
    os << "</g>\n";

    for (const Series &s : plot.series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) {
            os << " stroke-dasharray=\"6,4\"";
        }
        os << " points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            os << fixed(px(s.x[k])) << ',' << fixed(py(s.y[k])) << (k + 1 < s.x.size() ? " " : "");
        }
        os << "\"/>\n";
    }

    double ly = kTop + 14;
    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (const Band &b : plot.bands) {
        os << "<rect x=\"" << fixed(kLeft + pw - 170) << "\" y=\"" << fixed(ly - 9) << "\" width=\"24\" height=\"10\" "
           << "fill=\"" << b.color << "\" fill-opacity=\"" << fixed(b.opacity, 3) << "\"/>\n";
        os << "<text x=\"" << fixed(kLeft + pw - 140) << "\" y=\"" << fixed(ly) << "\">" << escape(b.label)
           << "</text>\n";
        ly += 16;
    }
    for (const Series &s : plot.series) {
        os << "<line x1=\"" << fixed(kLeft + pw - 170) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\""
           << fixed(kLeft + pw - 146) << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        os << "<text x=\"" << fixed(kLeft + pw - 140) << "\" y=\"" << fixed(ly) << "\">" << escape(s.label)
           << "</text>\n";
        ly += 16;
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace qdeph::svg
