#pragma once

#include <cstddef>
#include <functional>

namespace manifold::parallel {

// Worker pool size used by parallel_for. 0 means hardware concurrency.
// Mirrors the --threads flag / MANIFOLD_ID_THREADS.
void set_threads(int n);
int threads();

// Runs fn(i) for i in [begin, end). Work is split into contiguous chunks,
// one per worker; each index writes only its own output slots, so results
// are identical for any thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace manifold::parallel
