#pragma once

#include <cstddef>
#include <functional>

namespace forge {

/// Worker count for analysis loops; 1 disables threading. 0 picks the hardware concurrency.
void set_parallelism(std::size_t threads);
std::size_t parallelism();

/// Runs body(i) for i in [0, n). Bodies must only write to slot i of their
/// outputs, which keeps results independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace forge
