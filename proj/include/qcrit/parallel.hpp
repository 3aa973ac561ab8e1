#pragma once

#include <cstddef>
#include <functional>

namespace qcrit {

// Worker count: QCRIT_THREADS if set (positive integer), otherwise the
// available hardware parallelism.
int thread_count();

// Runs fn(i) for i in [0, n).  Work is split in contiguous index blocks; the
// caller writes results into pre-sized slots indexed by i, so the output is
// independent of the worker count.  Exceptions are captured and rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace qcrit
