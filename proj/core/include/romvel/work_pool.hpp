#pragma once

#include <cstddef>
#include <functional>

namespace romvel {

/// Runs task(i) for i in [0, count) on up to `threads` worker threads
/// (0 = hardware concurrency). Each index runs exactly once and results must
/// be written to per-index slots, so output order never depends on scheduling.
/// The first exception thrown by a task is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

/// Worker count actually used for `threads` (resolves 0).
int resolve_threads(int threads);

}  // namespace romvel
