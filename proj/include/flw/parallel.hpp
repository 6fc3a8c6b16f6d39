#pragma once

#include <cstddef>
#include <functional>

namespace flw {

// Worker count for scans and trials; 0 means hardware concurrency.
void set_jobs(int jobs);
int jobs();

// Calls fn(i) for i in [0, count) across jobs() threads. Callers write into
// per-index slots, so results never depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace flw
