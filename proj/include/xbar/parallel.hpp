#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace xbar {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results land by index,
// so output order never depends on scheduling. The first exception is rethrown.
template <class T>
std::vector<T> parallel_map(size_t count, int jobs, const std::function<T(size_t)>& fn) {
    std::vector<T> out(count);
    size_t workers = std::min<size_t>(count, static_cast<size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto work = [&] {
        for (size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace xbar
