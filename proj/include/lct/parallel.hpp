#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace lct {

/// Worker count for parallel sections. `requested` wins when nonzero;
/// otherwise hardware concurrency. LCT_THREADS caps either.
inline unsigned worker_count(unsigned requested = 0)
{
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LCT_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1)
                n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            // unparsable cap is ignored
        }
    }
    return std::max(1u, n);
}

/// Runs task(i) for i in [0, tasks) on up to `workers` threads. Tasks must
/// write only to their own output slot; the caller reduces in index order,
/// so results never depend on scheduling. The first exception is rethrown.
template <class Task>
void parallel_for(std::size_t tasks, unsigned workers, Task&& task)
{
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks; ++i)
            task(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = tasks;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace lct
