#pragma once

#include <cstddef>
#include <functional>

namespace spectra {

/// Worker count: hardware concurrency capped by SPECTRA_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, n) over a static partition. Each index is visited
/// exactly once, so writing to slot i of a preallocated output is race-free.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace spectra
