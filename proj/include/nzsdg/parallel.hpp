#pragma once

#include <cstddef>
#include <functional>

namespace nzsdg {

// Worker count used by parallel_for. 0 means "auto": the NZSDG_THREADS
// environment variable if set and positive, else hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

// Calls body(begin, end) over disjoint contiguous chunks of [0, n).
// Callers write results into per-index slots, so output is independent of
// the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace nzsdg
