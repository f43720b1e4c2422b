#pragma once

#include <cstddef>
#include <functional>

namespace tomolab {

// Worker count: hardware concurrency, capped by the TOMOLAB_THREADS environment variable.
unsigned thread_count();

// Runs fn(i) for i in [0, n) over contiguous chunks. Each index must write
// only its own output slot, so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tomolab
