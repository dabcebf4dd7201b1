#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace degen_control {
namespace detail {

    // Runs body(i) for i in [0, n) on up to `threads` workers with static
    // chunking; each index is handled by exactly one worker, so results do not
    // depend on the worker count.
    template <class F>
    void parallel_for(int n, int threads, F&& body)
    {
        threads = std::max(1, std::min(threads, n));
        if (threads == 1) {
            for (int i = 0; i < n; ++i) body(i);
            return;
        }
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = w; i < n; i += threads) body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

}
}
