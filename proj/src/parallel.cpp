#include "gdba/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gdba {

namespace {
std::atomic<std::size_t> g_threads{0};
}

void set_thread_count(std::size_t threads) noexcept { g_threads.store(threads); }

std::size_t thread_count() noexcept {
    const std::size_t requested = g_threads.load();
    if (requested != 0) return requested;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)> &fn) {
    const std::size_t workers = std::min(thread_count(), n_tasks);
    if (workers <= 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) {
            try {
                fn(t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_tasks);
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();

    if (failure) std::rethrow_exception(failure);
}

}  // namespace gdba
