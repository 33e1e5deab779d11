#pragma once

#include <cstddef>
#include <functional>

namespace gcm {

/// Worker cap from GCM_THREADS (positive integer), else the logical core
/// count. Throws std::invalid_argument for a malformed GCM_THREADS.
unsigned worker_count();

/// Runs fn(i) for i in [0, n) on at most `workers` threads. Each index is
/// processed exactly once; the first exception thrown is rethrown after all
/// workers join. Results must be written to per-index slots by the caller.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace gcm
