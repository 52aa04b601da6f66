#pragma once

#include <functional>

namespace flowparts {

// Runs fn(0..count-1) on up to `jobs` threads. Indices are claimed from an
// atomic counter; if workers throw, the exception from the lowest index is
// rethrown after all threads join. jobs <= 1 runs inline.
void parallel_for_indexed(int jobs, int count, const std::function<void(int)>& fn);

}  // namespace flowparts
