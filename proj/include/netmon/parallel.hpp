#pragma once

// Replication fan-out. The serial loop is the reference implementation; the
// OpenMP loop must produce identical results because every replication owns
// its random streams and writes only its own output slot.

#include <cstddef>
#include <exception>
#include <mutex>
#include <string_view>

#include "netmon/error.hpp"

namespace netmon {

enum class ExecutionPolicy { serial, parallel };

std::string_view to_string(ExecutionPolicy policy) noexcept;
ExecutionPolicy parse_policy(std::string_view text);

/// Threads the parallel policy will use (1 without OpenMP).
int parallel_threads();

template <class Fn>
void for_each_index_serial(std::size_t count, Fn&& fn) {
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

template <class Fn>
void for_each_index_parallel(std::size_t count, Fn&& fn) {
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

template <class Fn>
void for_each_index(ExecutionPolicy policy, std::size_t count, Fn&& fn) {
  if (policy == ExecutionPolicy::parallel) {
    for_each_index_parallel(count, fn);
  } else {
    for_each_index_serial(count, fn);
  }
}

}  // namespace netmon
