#pragma once

#include <cstddef>
#include <functional>

namespace fractalis {

/// Worker count from FRACTALIS_THREADS; falls back to hardware concurrency.
[[nodiscard]] std::size_t worker_count();

/// Runs body(i) for i in [0, count) over at most worker_count() threads.
/// Each index is visited exactly once; callers write results into slot i,
/// so aggregate output never depends on scheduling. The first exception
/// thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fractalis
