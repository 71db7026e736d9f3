#pragma once

#include <cstddef>
#include <functional>

namespace qlab::detail {

/// Worker count: QLAB_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Iterations must not share mutable state;
/// callers reduce per-iteration results afterwards in index order so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qlab::detail
