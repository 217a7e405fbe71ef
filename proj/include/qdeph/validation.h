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

#ifndef QDEPH_VALIDATION_H
#define QDEPH_VALIDATION_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qdeph {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// "oracles", "spectra", "statistics".
const std::vector<std::string> &validation_suite_names();

/// Runs the named invariant suite. Monte Carlo checks derive their streams
/// from `seed`. Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_validation_suite(std::string_view suite, std::uint64_t seed, int threads);

}  // namespace qdeph

#endif
