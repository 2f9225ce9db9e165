#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ldplab {

// Worker count: LDPLAB_THREADS from the environment wins, then the value
// given to set_thread_count (CLI --threads), then hardware concurrency.
int thread_count();
void set_thread_count(int threads);

/// Runs body(chunk) for chunk in [0, chunks) on up to thread_count() workers.
/// Callers write results into per-chunk slots and reduce them in chunk order,
/// which keeps every reduction independent of the worker count.
template <class Body>
void parallel_for_chunks(std::size_t chunks, Body&& body) {
    const std::size_t workers =
        std::min<std::size_t>(chunks, static_cast<std::size_t>(std::max(1, thread_count())));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            body(c);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) {
                return;
            }
            try {
                body(c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(chunks);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

// Number of fixed-size chunks covering `count` items.
inline std::size_t chunk_count(std::size_t count, std::size_t chunk_size) {
    return (count + chunk_size - 1) / chunk_size;
}

}  // namespace ldplab
