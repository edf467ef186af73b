#pragma once

#include <cstddef>
#include <functional>

namespace cewpt {

/// Runs body(i) for i in [0, count) on up to `threads` workers (<= 0 means
/// hardware concurrency). Each index runs exactly once; callers write results
/// into per-index slots so output never depends on scheduling. The first
/// exception thrown by a body is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

int resolve_threads(int threads);

}  // namespace cewpt
