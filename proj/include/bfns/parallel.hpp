#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bfns {

/// Environment variable that caps the worker count (never raises it).
inline constexpr const char* kMaxJobsVariable = "BFNS_MAX_JOBS";

/// Effective worker count: max(1, requested), lowered to $BFNS_MAX_JOBS when set.
int resolve_jobs(int requested);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Every task runs even
/// when some fail; afterwards the exception of the lowest failing index is
/// rethrown, so error reporting does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(jobs < 1 ? 1 : jobs));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace bfns
