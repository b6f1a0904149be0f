#pragma once

#include <cstddef>
#include <functional>

namespace gdba {

/// Worker count used by the parallel kernels. 0 means hardware concurrency.
void set_thread_count(std::size_t threads) noexcept;
[[nodiscard]] std::size_t thread_count() noexcept;

/// Runs fn(task) for task in [0, n_tasks) on up to thread_count() workers.
/// Tasks are claimed dynamically; callers must write only task-owned outputs.
/// The first exception thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)> &fn);

}  // namespace gdba
