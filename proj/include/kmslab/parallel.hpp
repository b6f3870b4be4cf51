#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace kmslab {

// Serial is the reference path; Parallel distributes indices with OpenMP.
// Per-index work must be independent, so both produce identical outputs.
enum class Exec { Serial, Parallel };

template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Number of OpenMP workers that a Parallel region would use.
int worker_count();
void set_worker_count(int workers);

}  // namespace kmslab
