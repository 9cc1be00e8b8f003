// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace tsvar {

/// Worker count: TSVAR_THREADS when set, hardware concurrency otherwise.
inline std::size_t thread_count() {
    if (const char* env = std::getenv("TSVAR_THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/**
 * Run f(i) for i in [0, n) across worker threads.
 *
 * Items must be independent; callers index results into preallocated slots
 * so output order never depends on scheduling. The first exception thrown by
 * any item is rethrown after all workers join.
 */
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    const std::size_t workers = std::min(thread_count(), n == 0 ? std::size_t{1} : n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace tsvar
