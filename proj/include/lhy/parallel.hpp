#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lhy {

// Runs body(i) for i in [0, count) on `workers` threads using a static
// interleaved partition. Each index is written by exactly one call, so results
// stored per index do not depend on the worker count.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    // A worker stops at its first failure; the failure with the smallest index
    // is rethrown, which is the same one a serial run would raise.
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> failed_at(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            std::size_t i = w;
            try {
                for (; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
                failed_at[w] = i;
            }
        });
    }
    for (auto& t : pool) t.join();
    const auto first = std::min_element(failed_at.begin(), failed_at.end());
    if (*first < count) std::rethrow_exception(errors[first - failed_at.begin()]);
}

}  // namespace lhy
