// SPDX-License-Identifier: Apache-2.0
#include "wchaos/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wchaos {

namespace {
std::atomic<int> g_threads{0};
}

void setThreadCount(int threads)
{
    g_threads.store(threads);
}

int threadCount()
{
    const int t = g_threads.load();
    if (t >= 1) {
        return t;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

void parallelFor(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body)
{
    if (count == 0) {
        return;
    }
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threadCount()), count);
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::exception_ptr error;
    std::mutex errorMutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(errorMutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace wchaos
