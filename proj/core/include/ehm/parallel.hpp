#pragma once

#include <cstddef>
#include <functional>

namespace ehm {

/// Worker count used by parallel maps. Defaults to $EHM_THREADS, else the
/// hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Runs body(i) for i in [0, n) over contiguous static partitions. Callers
/// write results by index, so output never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ehm
