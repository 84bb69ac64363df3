// Order-preserving parallel map over independent jobs.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ionchaos {

/// results[i] = job(i) for i in [0, count), computed on up to `workers`
/// threads.  Jobs must not share mutable state; results land in input order.
/// Exceptions escaping a job terminate the program, so jobs report failures
/// through their return value.
template <class Result, class Job>
std::vector<Result> parallel_map(std::size_t count, int workers, Job&& job) {
  std::vector<Result> results(count);
  const auto n_threads =
      static_cast<std::size_t>(std::clamp<long>(workers, 1, static_cast<long>(std::max<std::size_t>(count, 1))));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t w = 0; w < n_threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) results[i] = job(i);
      });
    }
  }  // joins
  return results;
}

}  // namespace ionchaos
