#pragma once

#include <functional>

namespace skglass {

/// Resolve a requested worker count: values >= 1 pass through, anything else
/// (0 = automatic) maps to the hardware concurrency, clamped to [1, 32].
int resolve_worker_count(int requested);

/// Run body(i) for i in [0, count) on up to `workers` threads. Tasks are
/// claimed from an atomic counter; the caller owns any output slots, so the
/// result layout is independent of scheduling order.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

} // namespace skglass
