#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <vector>

namespace ho {

// Serial is the reference path; Parallel uses OpenMP and must produce
// identical results.
enum class Execution { Serial, Parallel };

int max_threads();
void set_threads(int n);

// Runs body(i) for i in [0, count). Exceptions are captured per task and the
// lowest-index one is rethrown after the loop.
template <class Body>
void for_each_task(std::size_t count, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::int64_t>(count);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Collects body(i) into a vector ordered by task index.
template <class T, class Body>
std::vector<T> map_tasks(std::size_t count, Execution exec, Body&& body) {
  std::vector<T> out(count);
  for_each_task(count, exec, [&](std::size_t i) { out[i] = body(i); });
  return out;
}

}  // namespace ho
