#pragma once

#include <cstddef>
#include <functional>

namespace vtinv {

/// Worker count: `VTINV_THREADS` when set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs `fn(i)` for i in [0, n) on up to `worker_count()` threads. Callers
/// write into pre-sized slots so results do not depend on scheduling. The
/// first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vtinv
