#ifndef WAVESPLAT_PARALLEL_HPP
#define WAVESPLAT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace wavesplat {

// Process-wide cap on worker threads used by parallel_for (0 = hardware
// concurrency). Runs that must stay single-threaded set this to 1.
void set_parallelism(int threads);
int effective_parallelism();

// Splits [begin, end) into contiguous chunks, one per worker. Results must
// not depend on the chunking: bodies may only write to disjoint state.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace wavesplat

#endif
