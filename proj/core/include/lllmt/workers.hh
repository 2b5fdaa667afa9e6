#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace lllmt {

/// Worker count for fork-join loops: $LLLMT_THREADS if set, else hardware concurrency.
auto worker_count() -> unsigned;

/// Runs body(i) for i in [0, n) across `workers` threads with static chunking.
/// Results must not depend on the partition; bodies write only to slot i of
/// their outputs. The first exception thrown by any body is rethrown.
template <typename Body>
void parallel_for(std::size_t n, Body && body, unsigned workers = worker_count())
{
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    if (workers > n)
        workers = static_cast<unsigned>(n);

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
        threads.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            }
            catch (...) {
                std::lock_guard lock(failure_mutex);
                if (! failure)
                    failure = std::current_exception();
            }
        });
    }
    threads.clear();
    if (failure)
        std::rethrow_exception(failure);
}

}
