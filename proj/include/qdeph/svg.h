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

#ifndef QDEPH_SVG_H
#define QDEPH_SVG_H

#include <string>
#include <vector>

#include "qdeph/io.h"

namespace qdeph::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

/// Filled region between lo and hi.
struct Band {
    std::string label;
    std::vector<double> x;
    std::vector<double> lo;
    std::vector<double> hi;
    std::string color = "#2ca02c";
    double opacity = 0.2;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Band> bands;
    std::vector<Series> series;
    /// Embedded as an XML comment at the top of the document.
    io::Provenance provenance;
};

/// Renders a line plot with axis ticks and a legend. The output depends only
/// on the plot contents, with coordinates printed at fixed precision.
std::string render(const Plot &plot);

}  // namespace qdeph::svg

#endif
