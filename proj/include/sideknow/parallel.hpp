#pragma once

#include <cstddef>
#include <functional>

namespace sideknow {

/// Worker cap for parallel loops. Defaults to SIDEKNOW_THREADS when set,
/// otherwise the hardware concurrency.
std::size_t thread_count();
void set_thread_count(std::size_t threads);

/// Runs body(i) for i in [0, count). Tasks must write only to slots they own.
/// If any task throws, the exception of the lowest failing index is rethrown.
/// Calls made from inside a running loop execute serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sideknow
