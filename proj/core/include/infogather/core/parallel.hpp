#pragma once

#include <functional>

namespace infogather {

/// Runs fn(0) .. fn(n - 1) on up to `jobs` threads (jobs <= 1 runs inline).
/// Indices are claimed dynamically, so fn must not depend on which thread
/// runs it. If any call throws, the exception from the lowest failing index
/// is rethrown after all threads have joined.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace infogather
