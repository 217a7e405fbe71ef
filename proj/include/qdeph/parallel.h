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

#ifndef QDEPH_PARALLEL_H
#define QDEPH_PARALLEL_H

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qdeph {

/// Work items are grouped into fixed chunks of this many realizations. Every
/// reduction sums within a chunk in index order and then across chunks in
/// chunk order, so results do not depend on the worker count.
inline constexpr std::size_t kChunkSize = 256;

inline std::size_t chunk_count(std::size_t n, std::size_t chunk = kChunkSize) {
    return (n + chunk - 1) / chunk;
}

/// Calls fn(chunk_index, begin, end) for every chunk of [0, n), spreading
/// chunks over `threads` workers. The first exception thrown is rethrown.
template <class Fn>
void for_each_chunk(std::size_t n, int threads, Fn &&fn, std::size_t chunk = kChunkSize) {
    std::size_t n_chunks = chunk_count(n, chunk);
    auto run_chunk = [&](std::size_t c) {
        std::size_t begin = c * chunk;
        fn(c, begin, std::min(n, begin + chunk));
    };
    std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n_chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            run_chunk(c);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < n_chunks; c = next++) {
                try {
                    run_chunk(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = n_chunks;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace qdeph

#endif
