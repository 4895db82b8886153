// Copyright 2026 The cpmgoc Authors.
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

#include "cpmgoc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cpmgoc {

namespace {

std::atomic<unsigned> g_thread_limit{0};
thread_local bool t_inside_parallel = false;

// Chunks smaller than this are not worth a thread.
constexpr std::size_t kMinChunk = 4;

}  // namespace

void set_thread_limit(unsigned threads) { g_thread_limit.store(threads); }

unsigned thread_limit() {
    unsigned t = g_thread_limit.load();
    if (t == 0) {
        t = std::max(1u, std::thread::hardware_concurrency());
    }
    return t;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
    std::size_t workers = std::min<std::size_t>(thread_limit(), n / kMinChunk);
    if (workers <= 1 || t_inside_parallel) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run_chunk = [&](std::size_t begin, std::size_t end) {
        t_inside_parallel = true;
        try {
            for (std::size_t i = begin; i < end; ++i) {
                body(i);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
        t_inside_parallel = false;
    };

    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin < end) {
            threads.emplace_back(run_chunk, begin, end);
        }
    }
    run_chunk(0, std::min(n, chunk));
    threads.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace cpmgoc
