#pragma once

#include <cstddef>
#include <functional>

namespace fairgap {

// Effective worker count: FAIRGAP_THREADS if set (clamped to >= 1), otherwise
// std::thread::hardware_concurrency().
int max_threads();

// Runs fn(i) for i in [0, count) on up to max_threads() workers. Each index is
// handled exactly once; callers write results into preallocated slots so the
// output order never depends on scheduling. Exceptions from workers are
// rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace fairgap
