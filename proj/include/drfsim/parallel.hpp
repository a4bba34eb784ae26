#pragma once

#include <cstddef>
#include <functional>

namespace drfsim {

/// Worker count: DRFSIM_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index is executed exactly once; callers write results into slot i so the
/// output is independent of the schedule. The first exception thrown by any
/// task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace drfsim
