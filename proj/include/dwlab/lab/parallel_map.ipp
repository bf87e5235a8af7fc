#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace dwlab::lab {

template <class T>
std::vector<T> parallel_map(std::size_t n, std::size_t workers,
                            const std::function<T(std::size_t)>& fn) {
    std::vector<std::optional<T>> slots(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const std::size_t k = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (k == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < k; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace dwlab::lab
