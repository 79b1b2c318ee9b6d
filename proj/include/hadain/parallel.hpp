#pragma once

#include <cstddef>
#include <functional>

namespace hadain {

// Splits [0, n) into at most `threads` contiguous chunks and runs
// body(begin, end) on each, one std::thread per chunk beyond the first.
// Chunk boundaries depend only on (n, threads). The first exception thrown by
// any chunk is rethrown after all chunks finish.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace hadain
