#pragma once

#include <cstddef>
#include <functional>

namespace vibropol {

/// Worker cap. Defaults to VIBROPOL_THREADS when set to a positive integer,
/// otherwise std::thread::hardware_concurrency().
std::size_t max_threads();
void set_max_threads(std::size_t n);  // 0 restores the default

/// Runs fn(i) for i in [0, n). Each index is visited exactly once, so callers
/// that write only to slot i get output independent of scheduling. If any
/// call throws, the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vibropol
