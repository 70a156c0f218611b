#pragma once

#include <functional>

namespace hdgpod {

/// Number of worker threads used by element loops (default 1).
void set_num_threads(int n);
[[nodiscard]] int num_threads();

/// Runs body(i) for i in [0, n), split into contiguous chunks across workers.
/// Callers must only write to state owned by index i.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace hdgpod
