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

#include "qdeph/rng.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace qdeph {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t parent, std::uint64_t stream) {
    std::uint64_t s = parent;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0xD1B54A32D192ED03ULL);
    return splitmix64(s);
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

PathRng::PathRng(std::uint64_t key, std::uint64_t path_index)
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)}, path_(path_index) {
}

void PathRng::refill() {
    buffer_ = philox4x32(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
        key_);
    ++block_;
    pos_ = 0;
}

std::uint64_t PathRng::next_u64() {
    if (pos_ > 2) {
        refill();
    }
    std::uint64_t v = (static_cast<std::uint64_t>(buffer_[pos_]) << 32) | buffer_[pos_ + 1];
    pos_ += 2;
    return v;
}

double PathRng::uniform() {
    // 53 random bits mapped to the midpoints of 2^53 equal cells: never 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double PathRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform()));
    double theta = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double PathRng::exponential(double rate) {
    if (rate <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return -std::log(uniform()) / rate;
}

double PathRng::sign() {
    return (next_u64() >> 63) ? 1.0 : -1.0;
}

}  // namespace qdeph
