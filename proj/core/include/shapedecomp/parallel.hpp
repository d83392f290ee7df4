#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace shapedecomp {

// SHAPEDECOMP_THREADS if set to a positive integer, else the hardware count.
int thread_count();

// Runs body(i) for i in [0, n).  Each index must write only its own output
// slot; results are then independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

// Independent generator for (seed, stream): the basis of counter-based
// substreams for parallel batches.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

}  // namespace shapedecomp
