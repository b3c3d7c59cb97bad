#pragma once

#include <cstddef>
#include <functional>

namespace qfc {

/// Worker count: QFC_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) over worker_count() threads. Each index is
/// processed exactly once; callers write results into per-index slots so the
/// outcome never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qfc
