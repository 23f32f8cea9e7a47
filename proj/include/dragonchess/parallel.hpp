#pragma once

#include <functional>

namespace dragonchess {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. The first exception
// thrown by any call is rethrown after all workers finish.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

// std::thread::hardware_concurrency with a floor of 1.
int default_jobs();

}  // namespace dragonchess
