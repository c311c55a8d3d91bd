#pragma once

#include <functional>

namespace rd {

/// RDEULER_THREADS if set (>= 1), else the hardware concurrency
int worker_count();
/// n <= 0 restores the default
void set_worker_count(int n);

/// Runs fn on contiguous chunks [begin, end) of [0, n). Chunks are disjoint;
/// the caller is responsible for an ordered reduction afterwards.
void parallel_for(int n, const std::function<void(int, int)> &fn);

} // namespace rd
