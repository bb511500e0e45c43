#ifndef SCV_PARALLEL_HPP
#define SCV_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace scv {

// Runs fn(i) for i in [0, n). Work items must be independent; callers that
// need a reduction write into a preallocated array and reduce sequentially
// afterwards so results do not depend on the number of jobs.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (jobs > n) jobs = static_cast<unsigned>(n);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += jobs) fn(i);
        });
    }
    for (auto& t : workers) t.join();
}

} // namespace scv

#endif
