#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include <omp.h>

namespace pdbary::detail {

/// Runs body(i) for i in [0, n) on up to `threads` OpenMP threads. The first
/// exception thrown by any iteration is rethrown on the calling thread.
template <typename Body>
void parallelFor(std::size_t n, int threads, Body&& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failureMutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failureMutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pdbary::detail
