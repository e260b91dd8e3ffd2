#pragma once

#include <cstddef>
#include <functional>

namespace urt {

/// Caps the number of worker threads used by parallel loops. 0 restores the hardware default.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Calls body(i) for every i in [0, count). Each index is handled by exactly one worker, so any
/// body that writes only to slot i produces bitwise identical results for every thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace urt
