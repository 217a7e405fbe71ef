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

#ifndef QDEPH_CONFIG_H
#define QDEPH_CONFIG_H

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdeph/dephasing.h"
#include "qdeph/io.h"
#include "qdeph/noise.h"
#include "qdeph/spectral.h"

namespace qdeph {

/// Configuration problem attributed to one key (or "line N" for syntax).
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(std::string key, const std::string &message)
        : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
    const std::string &key() const { return key_; }

   private:
    std::string key_;
};

/// Raw `section.key -> value` text, before validation.
using KeyValues = std::map<std::string, std::string>;

/// Parses line-oriented `section.key = value` text. Blank lines and lines
/// starting with '#' are ignored, as is anything after " #" on a line.
/// Duplicate keys and malformed lines raise ConfigError.
KeyValues parse_key_values(std::string_view text);

/// Every key the resolver accepts.
const std::vector<std::string> &known_config_keys();

/// Artifact selectors understood by cmd_simulate.
inline constexpr const char *kOutputSelectors[] = {"curve", "bands", "spectrum", "autocorr",
                                                   "report", "svg", "ensemble"};

struct RunConfig {
    NoiseSpec noise;
    double t_max = 40.0;
    std::size_t n_out = 201;
    std::optional<std::size_t> substeps;
    double omega0 = 1.0;
    std::size_t n_realizations = 10000;
    std::optional<std::size_t> n_curves;
    std::uint64_t seed = 1;
    std::vector<std::string> outputs{"curve", "report"};
    std::string output_dir = ".";
    double significance = 3.0;
    int threads = 1;
    std::string format = "csv";
    ErrorMethod error_method = ErrorMethod::delta;
    double transient_cut = 0.0;
    Window window = Window::hann;
    double max_lag = 0.0;

    TimeGrid grid() const;
    bool wants(std::string_view selector) const;
    /// Resolved settings that determine the numerical output. Worker count
    /// and output directory are excluded, so artifacts do not depend on them.
    io::Provenance provenance() const;
};

/// Validates every key and builds the config. Throws ConfigError naming the
/// offending key before any computation can start.
RunConfig resolve_config(const KeyValues &kv);

/// parse_key_values followed by resolve_config.
RunConfig parse_config(std::string_view text);

}  // namespace qdeph

#endif
