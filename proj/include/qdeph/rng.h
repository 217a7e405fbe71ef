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

#ifndef QDEPH_RNG_H
#define QDEPH_RNG_H

#include <array>
#include <cstdint>

namespace qdeph {

/// One SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t &state);

/// Derives an independent 64-bit key from a parent key and a stream label.
///
/// Used to give every curve of a curve ensemble its own Philox key, so that
/// curve c is the same function of (master seed, c) no matter which worker
/// computes it.
std::uint64_t derive_key(std::uint64_t parent, std::uint64_t stream);

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Random stream for one realization.
///
/// The counter is (path index, block index); the key is the ensemble key.
/// Draws for path i therefore depend only on (key, i) and never on how paths
/// are distributed over threads.
class PathRng {
   public:
    PathRng(std::uint64_t key, std::uint64_t path_index);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Exponential waiting time with the given rate; +inf when rate == 0.
    double exponential(double rate);
    /// Fair +1 / -1.
    double sign();

   private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int pos_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qdeph

#endif
