#pragma once

#include <cstddef>
#include <functional>

namespace stochconv {

/// Number of worker threads used by ensemble-level loops. Defaults to the
/// hardware concurrency; results never depend on this value.
std::size_t worker_threads() noexcept;
void set_worker_threads(std::size_t n) noexcept;

/// Calls body(i) for i in [0, n), split into contiguous blocks over
/// worker_threads() threads. body must only write state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stochconv
