#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace recon {

inline int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n). With jobs <= 1 everything runs inline; otherwise
// worker w handles the strided slice {w, w+jobs, ...}. Callers must write
// results into per-index slots so the outcome is independent of scheduling.
// The first exception (by lowest index) is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
    jobs = effective_jobs(jobs);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace recon
