#pragma once

// OpenMP loop helpers. Every parallel kernel in the library has a serial
// counterpart that performs the same arithmetic in the same order, so the two
// produce bitwise-identical results and the serial one serves as the test
// reference.

#include <omp.h>

#include <exception>
#include <mutex>

#include <Eigen/Core>

namespace alpha_procrustes::parallel {

/// Thread cap: omp_get_max_threads(), lowered by ALPHA_PROC_THREADS when set
/// to a positive integer, or by set_max_threads().
int max_threads();

/// Overrides the thread cap for subsequent loops; n <= 0 restores the default.
void set_max_threads(int n);

/// Runs body(i) for i in [0, n) across threads. The first exception thrown by
/// any iteration is rethrown on the calling thread after the loop finishes.
template <class F>
void for_each_index(Eigen::Index n, F&& body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace alpha_procrustes::parallel
