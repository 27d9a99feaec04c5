#pragma once

#include <cstddef>
#include <functional>

namespace growthcast {

// Worker count for parallel sections: GROWTHCAST_THREADS if set (minimum 1),
// otherwise the hardware concurrency.
int worker_cap();

// Runs job(i) for i in [0, count) on up to max_workers threads. Exceptions
// from jobs are collected and the first one rethrown after all workers
// join. max_workers <= 1 runs inline.
void parallel_for_index(std::size_t count, int max_workers,
                        const std::function<void(std::size_t)>& job);

}  // namespace growthcast
