#pragma once

#include <cstddef>
#include <functional>

namespace vortex {

// Process-wide worker count used by the pairwise sums. Results are bitwise
// independent of this setting: work is split into contiguous chunks and every
// output element is accumulated by exactly one worker in fixed source order.
void set_worker_count(int workers);
int worker_count();

// Invoke fn(begin, end) on contiguous chunks of [0, n), one chunk per worker.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace vortex
