#pragma once

#include <cstddef>
#include <functional>

namespace heisenkit {

/// Global worker cap (the CLI --threads flag lands here). 0 = hardware default.
void set_max_threads(int threads);
int max_threads();

/// Runs fn(i) for i in [0, count).  Work is split into contiguous blocks;
/// callers get determinism by writing to slot i only, independent of the
/// thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace heisenkit
