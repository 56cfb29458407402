#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace srdf {

/* Global worker budget, set once by the CLI (--threads). 0 means "use
 * hardware concurrency". */
inline std::atomic<int>& thread_budget_storage()
{
    static std::atomic<int> budget{0};
    return budget;
}

inline void set_thread_budget(int n)
{
    thread_budget_storage().store(n < 0 ? 0 : n);
}

inline int thread_budget()
{
    int n = thread_budget_storage().load();
    if (n <= 0)
        n = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, n);
}

/* Runs fn(i) for i in [begin, end) on up to thread_budget() threads.
 * The range is split into contiguous chunks, one per worker; every
 * iteration must be independent of the others. Exceptions from workers
 * are rethrown on the calling thread. */
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, Fn&& fn)
{
    const std::int64_t count = end - begin;
    if (count <= 0)
        return;

    const int workers = static_cast<int>(
        std::min<std::int64_t>(thread_budget(), count));
    if (workers <= 1) {
        for (std::int64_t i = begin; i < end; ++i)
            fn(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    const std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = begin + w * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&, lo, hi]() {
            try {
                for (std::int64_t i = lo; i < hi && !failed.load(); ++i)
                    fn(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true);
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace srdf
