#pragma once

#include <cstddef>
#include <functional>

namespace resonant {

// Worker count from RESONANT_WORKERS, else hardware concurrency (at least 1).
unsigned default_workers();

// Splits [0, n) into contiguous static chunks, one per worker. Chunk
// boundaries depend only on (n, workers), never on timing.
void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t begin, std::size_t end, unsigned worker)>& fn);

}  // namespace resonant
